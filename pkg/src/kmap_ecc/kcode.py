"""Core algebra of syndrome codes: weights, distances, side squares, Gray grids.

A K-code is the n-bit label of one Karnaugh-map square, stored as a plain
int.  Bit k (1-indexed) stands for parity check P_k, so the unit code for
P_k is ``1 << (k - 1)``.  All operations take the map width ``n`` explicitly;
codes from maps of different widths must never be mixed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

MIN_WIDTH = 4
MAX_WIDTH = 16


def check_width(n: int) -> int:
    if not MIN_WIDTH <= n <= MAX_WIDTH:
        raise ValueError(f"map width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {n}")
    return n


def check_code(code: int, n: int) -> int:
    """Validate that `code` is an n-bit K-code; doubles as the width-mismatch guard."""
    check_width(n)
    if not 0 <= code < (1 << n):
        raise ValueError(f"code {code} does not fit a {n}-bit map")
    return code


def weight(code: int) -> int:
    """Number of set bits; `code` lies in the weight class N_weight."""
    return code.bit_count()


def distance(a: int, b: int, n: int) -> int:
    """Hamming distance between two squares of the same n-bit map."""
    check_code(a, n)
    check_code(b, n)
    return (a ^ b).bit_count()


def parity_code(k: int) -> int:
    """Unit code e_k for parity bit P_k (1-indexed)."""
    if k < 1:
        raise ValueError(f"parity index must be >= 1, got {k}")
    return 1 << (k - 1)


def parities(code: int) -> tuple[int, ...]:
    """Ascending 1-indexed positions of the set bits."""
    return tuple(k + 1 for k in range(code.bit_length()) if code >> k & 1)


def from_parities(ks) -> int:
    code = 0
    for k in ks:
        code |= parity_code(k)
    return code


def n_class(m: int, n: int) -> tuple[int, ...]:
    """All binomial(n, m) codes of weight m, ascending."""
    check_width(n)
    if not 0 <= m <= n:
        raise ValueError(f"weight class must be in [0, {n}], got {m}")
    return tuple(sorted(sum(1 << b for b in bits) for bits in combinations(range(n), m)))


def side_squares(code: int, order: int, n: int) -> tuple[int, ...]:
    """Squares at exact Hamming distance `order` (1 or 2) from `code`, ascending."""
    check_code(code, n)
    if order not in (1, 2):
        raise ValueError(f"side-square order must be 1 or 2, got {order}")
    out = []
    for bits in combinations(range(n), order):
        y = code
        for b in bits:
            y ^= 1 << b
        out.append(y)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# text and JSON forms
# ---------------------------------------------------------------------------

_SET_TOKEN = re.compile(r"P_?(\d+)")


def set_label(code: int) -> str:
    """Set notation, e.g. 90 -> "P2+P4+P6+P7"; the zero square is "0"."""
    if code == 0:
        return "0"
    return "+".join(f"P{k}" for k in parities(code))


def parse_set_label(label: str) -> int:
    label = label.strip()
    if label == "0":
        return 0
    toks = _SET_TOKEN.findall(label)
    if not toks or "+".join(f"P{t}" for t in toks) != label.replace("_", ""):
        raise ValueError(f"not a K-code set label: {label!r}")
    return from_parities(int(t) for t in toks)


def binary_label(code: int, n: int) -> str:
    """Bit string b_n..b_1 (highest parity first)."""
    check_code(code, n)
    return format(code, f"0{n}b")


def parse_binary_label(label: str) -> tuple[int, int]:
    """Returns (code, width)."""
    if not label or set(label) - {"0", "1"}:
        raise ValueError(f"not a binary K-code label: {label!r}")
    return int(label, 2), len(label)


def code_to_json(code: int, n: int) -> dict:
    check_code(code, n)
    return {"code": code, "n": n}


def code_from_json(obj: dict) -> tuple[int, int]:
    code, n = int(obj["code"]), int(obj["n"])
    check_code(code, n)
    return code, n


# ---------------------------------------------------------------------------
# Gray-coded grid layout
# ---------------------------------------------------------------------------

def gray(i: int) -> int:
    """i-th reflected-Gray codeword."""
    return i ^ (i >> 1)


def gray_index(g: int) -> int:
    """Inverse of gray(): the position of codeword g in the sequence."""
    i = 0
    while g:
        i ^= g
        g >>= 1
    return i


@dataclass(frozen=True)
class GrayLayout:
    """Assignment of parity variables to the two Gray-ordered grid axes.

    `row_vars` / `col_vars` list parity indices most-significant first; the
    label of a row is the Gray codeword of its index read over `row_vars`.
    The default layout puts the odd parities on rows and the even ones on
    columns, descending, which reproduces the standard published maps.
    """

    n: int
    row_vars: tuple[int, ...]
    col_vars: tuple[int, ...]

    def __post_init__(self):
        check_width(self.n)
        if sorted(self.row_vars + self.col_vars) != list(range(1, self.n + 1)):
            raise ValueError("row_vars and col_vars must partition 1..n")

    @property
    def row_count(self) -> int:
        return 1 << len(self.row_vars)

    @property
    def col_count(self) -> int:
        return 1 << len(self.col_vars)

    def _axis_value(self, code: int, axis: tuple[int, ...]) -> int:
        v = 0
        for var in axis:
            v = (v << 1) | (code >> (var - 1) & 1)
        return v

    def to_grid(self, code: int) -> tuple[int, int]:
        """Map a K-code to its (row index, column index)."""
        check_code(code, self.n)
        return (gray_index(self._axis_value(code, self.row_vars)),
                gray_index(self._axis_value(code, self.col_vars)))

    def from_grid(self, row: int, col: int) -> int:
        if not (0 <= row < self.row_count and 0 <= col < self.col_count):
            raise ValueError(f"grid index ({row}, {col}) out of range")
        code = 0
        for v, var in zip(self._bits(gray(row), len(self.row_vars)), self.row_vars):
            code |= v << (var - 1)
        for v, var in zip(self._bits(gray(col), len(self.col_vars)), self.col_vars):
            code |= v << (var - 1)
        return code

    @staticmethod
    def _bits(value: int, width: int) -> tuple[int, ...]:
        return tuple(value >> (width - 1 - i) & 1 for i in range(width))

    def row_bits(self, row: int) -> str:
        return format(gray(row), f"0{len(self.row_vars)}b")

    def col_bits(self, col: int) -> str:
        return format(gray(col), f"0{len(self.col_vars)}b")

    @property
    def row_order(self) -> tuple[str, ...]:
        return tuple(self.row_bits(r) for r in range(self.row_count))

    @property
    def col_order(self) -> tuple[str, ...]:
        return tuple(self.col_bits(c) for c in range(self.col_count))

    def row_of(self, bits: str) -> int:
        return gray_index(int(bits, 2))

    def col_of(self, bits: str) -> int:
        return gray_index(int(bits, 2))

    def to_json(self) -> dict:
        return {"n": self.n, "row_vars": list(self.row_vars), "col_vars": list(self.col_vars)}

    @classmethod
    def from_json(cls, obj: dict) -> "GrayLayout":
        return cls(int(obj["n"]), tuple(obj["row_vars"]), tuple(obj["col_vars"]))


@lru_cache(maxsize=None)
def default_layout(n: int) -> GrayLayout:
    """Odd parities on rows, even on columns, both descending."""
    check_width(n)
    rows = tuple(k for k in range(n, 0, -1) if k % 2 == 1)
    cols = tuple(k for k in range(n, 0, -1) if k % 2 == 0)
    return GrayLayout(n, rows, cols)
