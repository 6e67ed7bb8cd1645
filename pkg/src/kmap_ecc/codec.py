"""Encoder, syndrome computation and table-driven decoding for a placement.

Memory bit order of a codeword is (data bits, then P_1..P_n); transmission
order is a separate concern handled by orderings in the burst module.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .placement import ErrorPattern, Placement, require_valid

__all__ = [
    "Codeword", "CodecTables", "DecodeReport",
    "encode", "syndrome", "inject", "iter_patterns",
    "covered_triples", "build_tables", "decode",
]


@dataclass(frozen=True)
class Codeword:
    data: tuple[int, ...]
    parity: tuple[int, ...]

    def __post_init__(self):
        for b in self.data + self.parity:
            if b not in (0, 1):
                raise ValueError("codeword bits must be 0 or 1")

    @property
    def bits(self) -> tuple[int, ...]:
        return self.data + self.parity

    def binary(self) -> str:
        return "".join(map(str, self.bits))

    def hex(self) -> str:
        width = (len(self.bits) + 3) // 4
        return format(int(self.binary(), 2), f"0{width}x")

    @classmethod
    def from_bits(cls, bits: Sequence[int], d: int) -> "Codeword":
        bits = tuple(int(b) for b in bits)
        return cls(bits[:d], bits[d:])

    @classmethod
    def from_string(cls, text: str, d: int, n: int) -> "Codeword":
        """Parse a binary string of exactly d+n chars, else a hex string."""
        text = text.strip().lower().removeprefix("0x")
        total = d + n
        if len(text) == total and not set(text) - {"0", "1"}:
            word = text
        else:
            word = format(int(text, 16), f"0{total}b")
            if len(word) > total:
                raise ValueError(f"word {text!r} does not fit {total} bits")
        return cls.from_bits([int(c) for c in word], d)


def _parity_mask(data_bits: Sequence[int], p: Placement, odd_parity: bool) -> int:
    mask = 0
    for bit, code in zip(data_bits, p.data):
        if bit:
            mask ^= code
    if odd_parity:
        mask ^= (1 << p.n) - 1
    return mask


def encode(data_bits: Sequence[int], p: Placement, odd_parity: bool = False) -> Codeword:
    """Even parity: P_k is the XOR of the data bits whose code sets bit k."""
    if len(data_bits) != p.d:
        raise ValueError(f"expected {p.d} data bits, got {len(data_bits)}")
    mask = _parity_mask(data_bits, p, odd_parity)
    return Codeword(tuple(int(b) for b in data_bits),
                    tuple(mask >> k & 1 for k in range(p.n)))


def syndrome(word: Codeword, p: Placement, odd_parity: bool = False) -> int:
    """Received parity XOR recomputed parity; zero iff all checks pass."""
    if len(word.data) != p.d or len(word.parity) != p.n:
        raise ValueError("codeword shape does not match placement")
    received = sum(b << k for k, b in enumerate(word.parity))
    return received ^ _parity_mask(word.data, p, odd_parity)


def inject(word: Codeword, pattern: ErrorPattern) -> Codeword:
    """Flip the pattern's members."""
    data = list(word.data)
    parity = list(word.parity)
    for i in pattern.data:
        data[i - 1] ^= 1
    for k in pattern.parities:
        parity[k - 1] ^= 1
    return Codeword(tuple(data), tuple(parity))


def iter_patterns(p: Placement, sizes: Sequence[int] = (1, 2)) -> Iterator[ErrorPattern]:
    """All error patterns of the given sizes, in deterministic order."""
    members = ([ErrorPattern.of(data=(i,)) for i in range(1, p.d + 1)]
               + [ErrorPattern.of(parities=(k,)) for k in range(1, p.n + 1)])
    for size in sizes:
        for combo in combinations(members, size):
            data = frozenset().union(*(m.data for m in combo))
            ps = frozenset().union(*(m.parities for m in combo))
            yield ErrorPattern(data, ps)


def covered_triples(p: Placement) -> dict[int, ErrorPattern]:
    """Three-bit patterns decodable by table lookup, keyed by syndrome.

    A triple is covered when its syndrome square is unoccupied by the <=2-bit
    map and no other triple claims it.  All-data triples are tie-breakers'
    losers: they claim a square only when nothing else touches it, so a square
    contested between an all-data triple and one other pattern goes to the
    other pattern.  This is the one assignment rule consistent with the
    reference map of class S_447^433.
    """
    base = {0}
    for pat in iter_patterns(p, (1, 2)):
        base.add(pat.syndrome(p))
    hits: dict[int, list[ErrorPattern]] = {}
    for pat in iter_patterns(p, (3,)):
        s = pat.syndrome(p)
        if s in base:
            continue
        hits.setdefault(s, []).append(pat)
    out: dict[int, ErrorPattern] = {}
    for s, pats in hits.items():
        strong = [q for q in pats if len(q.data) < 3]
        if len(strong) == 1:
            out[s] = strong[0]
        elif not strong and len(pats) == 1:
            out[s] = pats[0]
    return out


@dataclass(frozen=True)
class CodecTables:
    """Immutable decoding tables: nonzero syndrome -> correctable pattern."""

    placement: Placement
    decode: Mapping[int, ErrorPattern]
    include_triples: bool

    @property
    def n_entries(self) -> int:
        return len(self.decode)

    def rows(self) -> list[tuple[int, str]]:
        return [(s, pat.label) for s, pat in sorted(self.decode.items())]


def build_tables(p: Placement, include_triples: bool = False) -> CodecTables:
    """Decoding tables for every 1- and 2-bit pattern, optionally extended with
    the covered triples; raises PlacementError (with the collision report) on
    an invalid placement."""
    require_valid(p)
    table: dict[int, ErrorPattern] = {}
    for pat in iter_patterns(p, (1, 2)):
        table[pat.syndrome(p)] = pat
    if include_triples:
        table.update(covered_triples(p))
    return CodecTables(p, table, include_triples)


@dataclass(frozen=True)
class DecodeReport:
    status: str            # "clean" | "corrected" | "uncorrectable"
    syndrome: int
    pattern: ErrorPattern | None


def decode(word: Codeword, tables: CodecTables,
           odd_parity: bool = False) -> tuple[Codeword, DecodeReport]:
    """Correct the received word if its syndrome is assigned; an unassigned
    nonzero syndrome reports detected-uncorrectable and leaves the word as is."""
    s = syndrome(word, tables.placement, odd_parity)
    if s == 0:
        return word, DecodeReport("clean", 0, None)
    pat = tables.decode.get(s)
    if pat is None:
        return word, DecodeReport("uncorrectable", s, None)
    return inject(word, pat), DecodeReport("corrected", s, pat)
