"""Data-bit placements: validity oracle, double-weight accounting, searches.

A placement assigns K-codes X_1..X_d to the data bits of a d-data /
n-parity code.  The single source of truth for correctness is
:func:`is_valid` (every one- and two-bit error pattern owns a distinct
syndrome square); all weight/distance/forbidden-square rules are search
pruning derived from it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from .kcode import check_code, check_width, parity_code, weight

__all__ = [
    "ErrorPattern", "Placement", "SClass", "Footprint", "Collision",
    "OccupiedResult", "PlacementError", "SearchStats",
    "occupied_map", "collisions", "is_valid",
    "parity_footprint", "footprint", "double_weight_count",
    "theorem1_overlap", "theorem2_overlap", "forbidden_squares",
    "guided_search", "naive_search", "permute_bits",
    "BLESSED_PAIR_SITUATIONS", "X3_DOUBLE_WEIGHT_TABLE",
    "reference_placements", "triple_classes",
]


# ---------------------------------------------------------------------------
# error patterns
# ---------------------------------------------------------------------------

_LABEL_TOKEN = re.compile(r"([XP])_?(\d+)")


@dataclass(frozen=True)
class ErrorPattern:
    """A set of flipped code bits: data indices and parity indices (1-based)."""

    data: frozenset[int] = frozenset()
    parities: frozenset[int] = frozenset()

    @classmethod
    def of(cls, data=(), parities=()) -> "ErrorPattern":
        return cls(frozenset(data), frozenset(parities))

    @property
    def size(self) -> int:
        return len(self.data) + len(self.parities)

    @property
    def label(self) -> str:
        """Canonical name, data members first: "X_1X_3", "X_2P_7", "P_1P_3P_6"."""
        if self.size == 0:
            return "clean"
        return ("".join(f"X_{i}" for i in sorted(self.data))
                + "".join(f"P_{k}" for k in sorted(self.parities)))

    @classmethod
    def parse(cls, label: str) -> "ErrorPattern":
        label = label.strip()
        if label in ("clean", ""):
            return cls()
        toks = _LABEL_TOKEN.findall(label)
        joined = "".join(f"{kind}{idx}" for kind, idx in toks)
        if not toks or joined != label.replace("_", ""):
            raise ValueError(f"not an error-pattern label: {label!r}")
        data = frozenset(int(i) for kind, i in toks if kind == "X")
        ps = frozenset(int(i) for kind, i in toks if kind == "P")
        if len(data) + len(ps) != len(toks):
            raise ValueError(f"repeated member in pattern label: {label!r}")
        return cls(data, ps)

    def sort_key(self):
        return (tuple(sorted(self.data)), tuple(sorted(self.parities)))

    def syndrome(self, placement: "Placement") -> int:
        s = 0
        for i in self.data:
            s ^= placement.data[i - 1]
        for k in self.parities:
            s ^= parity_code(k)
        return s


# ---------------------------------------------------------------------------
# placements and class descriptors
# ---------------------------------------------------------------------------

class PlacementError(ValueError):
    """Raised when an operation requires a valid placement but got collisions."""

    def __init__(self, message, collisions=()):
        super().__init__(message)
        self.collisions = tuple(collisions)


@dataclass(frozen=True)
class Placement:
    """Width n plus the ordered data-bit K-codes X_1..X_d.

    Construction checks ranges only; validity is a separate question so that
    colliding placements can still be inspected and reported.
    """

    n: int
    data: tuple[int, ...]

    def __post_init__(self):
        check_width(self.n)
        object.__setattr__(self, "data", tuple(int(x) for x in self.data))
        for x in self.data:
            check_code(x, self.n)

    @property
    def d(self) -> int:
        return len(self.data)

    @property
    def bit_count(self) -> int:
        return self.d + self.n

    def to_json(self) -> dict:
        return {"n": self.n, "data": list(self.data)}

    @classmethod
    def from_json(cls, obj: dict) -> "Placement":
        return cls(int(obj["n"]), tuple(int(x) for x in obj["data"]))


@dataclass(frozen=True)
class SClass:
    """Weights of X_1..X_k and their pairwise distances, distances in
    lexicographic pair order: (d12, d13, d23) for three data bits."""

    weights: tuple[int, ...]
    distances: tuple[int, ...]

    def __post_init__(self):
        k = len(self.weights)
        if len(self.distances) != k * (k - 1) // 2:
            raise ValueError("distance count does not match weight count")

    @classmethod
    def from_placement(cls, p: Placement, count: int | None = None) -> "SClass":
        k = min(p.d, 3) if count is None else count
        codes = p.data[:k]
        ws = tuple(weight(x) for x in codes)
        ds = tuple((a ^ b).bit_count() for a, b in combinations(codes, 2))
        return cls(ws, ds)

    @property
    def label(self) -> str:
        if all(v < 10 for v in self.weights + self.distances):
            return ("S_" + "".join(map(str, self.weights))
                    + "^" + "".join(map(str, self.distances)))
        return ("S_" + ",".join(map(str, self.weights))
                + "^" + ",".join(map(str, self.distances)))

    @classmethod
    def parse(cls, label: str) -> "SClass":
        m = re.fullmatch(r"S_?([\d,]+)\^([\d,]+)", label.strip())
        if not m:
            raise ValueError(f"not an S-class label: {label!r}")
        def nums(s):
            return tuple(int(t) for t in (s.split(",") if "," in s else s))
        return cls(nums(m.group(1)), nums(m.group(2)))

    def sort_key(self):
        return (self.weights, self.distances)


@dataclass(frozen=True)
class Footprint:
    """Squares an entity occupies plus its order-1/order-2 side squares."""

    occupied: frozenset[int]
    sides: frozenset[int]

    @property
    def all(self) -> frozenset[int]:
        return self.occupied | self.sides


# ---------------------------------------------------------------------------
# side-square tables and footprints
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _sides12(n: int) -> tuple[frozenset[int], ...]:
    """sides12[x] = all squares at distance 1 or 2 from x."""
    check_width(n)
    singles = [1 << b for b in range(n)]
    deltas = singles + [a ^ b for a, b in combinations(singles, 2)]
    return tuple(frozenset(x ^ t for t in deltas) for x in range(1 << n))


@lru_cache(maxsize=8)
def parity_footprint(n: int) -> Footprint:
    """Zero square, all P_k and P_kP_m squares, and every P_k side square."""
    check_width(n)
    units = [1 << b for b in range(n)]
    occupied = {0} | set(units) | {a ^ b for a, b in combinations(units, 2)}
    sides = set()
    table = _sides12(n)
    for u in units:
        sides |= table[u]
    return Footprint(frozenset(occupied), frozenset(sides - occupied))


def footprint(code: int, n: int) -> Footprint:
    check_code(code, n)
    return Footprint(frozenset((code,)), _sides12(n)[code])


def double_weight_count(candidate: int, priors: Sequence[int], n: int) -> int:
    """Distinct squares where `candidate`'s side squares land on anything the
    priors (always including the parity structure) occupy or flank."""
    check_code(candidate, n)
    taken = set(parity_footprint(n).all)
    table = _sides12(n)
    for x in priors:
        check_code(x, n)
        taken.add(x)
        taken |= table[x]
    return len(table[candidate] & taken)


def theorem1_overlap(a: int, b: int, n: int) -> int:
    """Count of shared order-2 side squares for a distance-4 pair (always 6)."""
    if (a ^ b).bit_count() != 4:
        raise ValueError("theorem1_overlap requires Hamming distance exactly 4")
    sa = set(_side_exact(a, 2, n))
    return len(sa.intersection(_side_exact(b, 2, n)))


def theorem2_overlap(a: int, b: int, n: int) -> int:
    """Shared side squares for an adjacent-weight distance-3 pair (always 6)."""
    if abs(weight(a) - weight(b)) != 1:
        raise ValueError("theorem2_overlap requires weights differing by exactly 1")
    if (a ^ b).bit_count() != 3:
        raise ValueError("theorem2_overlap requires Hamming distance exactly 3")
    return len(_sides12(n)[a] & _sides12(n)[b])


def _side_exact(code: int, order: int, n: int) -> list[int]:
    out = []
    for bits in combinations(range(n), order):
        y = code
        for b in bits:
            y ^= 1 << b
        out.append(y)
    return out


def forbidden_squares(x1: int, x2: int, n: int) -> frozenset[int]:
    """Squares where a third data bit would alias X_1P_k with X_2X_3 (and,
    symmetrically, X_2P_k with X_1X_3): {x1 ^ x2 ^ e_k}."""
    check_code(x1, n)
    check_code(x2, n)
    base = x1 ^ x2
    return frozenset(base ^ (1 << b) for b in range(n))


# ---------------------------------------------------------------------------
# validity oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Collision:
    syndrome: int
    patterns: tuple[ErrorPattern, ...]


@dataclass(frozen=True)
class OccupiedResult:
    placement: Placement
    mapping: dict | None
    collisions: tuple[Collision, ...]

    @property
    def valid(self) -> bool:
        return not self.collisions


def _pattern_codes(p: Placement) -> list[tuple[ErrorPattern, int]]:
    singles = ([(ErrorPattern.of(data=(i + 1,)), p.data[i]) for i in range(p.d)]
               + [(ErrorPattern.of(parities=(k,)), parity_code(k)) for k in range(1, p.n + 1)])
    out = [(ErrorPattern(), 0)] + singles
    for (pa, ca), (pb, cb) in combinations(singles, 2):
        out.append((ErrorPattern(pa.data | pb.data, pa.parities | pb.parities), ca ^ cb))
    return out


def occupied_map(p: Placement) -> OccupiedResult:
    """Assign every <=2-bit error pattern its syndrome square.

    Returns the mapping when all ``1 + (d+n) + C(d+n, 2)`` squares are
    distinct, otherwise the colliding groups; a collision is an inspection
    result, not an exception.
    """
    by_syndrome: dict[int, list[ErrorPattern]] = {}
    for pat, code in _pattern_codes(p):
        by_syndrome.setdefault(code, []).append(pat)
    clashes = tuple(
        Collision(code, tuple(sorted(pats, key=ErrorPattern.sort_key)))
        for code, pats in sorted(by_syndrome.items())
        if len(pats) > 1
    )
    if clashes:
        return OccupiedResult(p, None, clashes)
    return OccupiedResult(p, {code: pats[0] for code, pats in by_syndrome.items()}, ())


def collisions(p: Placement) -> tuple[Collision, ...]:
    return occupied_map(p).collisions


def is_valid(p: Placement) -> bool:
    """True iff every <=2-bit error pattern owns a distinct syndrome square."""
    return not _collides(p.data, p.n)


def _collides(data: Sequence[int], n: int) -> bool:
    codes = list(data) + [1 << b for b in range(n)]
    seen = {0}
    for c in codes:
        if c in seen:
            return True
        seen.add(c)
    for a, b in combinations(codes, 2):
        s = a ^ b
        if s in seen:
            return True
        seen.add(s)
    return False


def require_valid(p: Placement) -> Placement:
    result = occupied_map(p)
    if not result.valid:
        labels = ["=".join(q.label for q in c.patterns) for c in result.collisions]
        raise PlacementError(
            f"placement {p.data} is not a valid <=2-error map: " + ", ".join(labels),
            result.collisions,
        )
    return p


# ---------------------------------------------------------------------------
# searches
# ---------------------------------------------------------------------------

#: Pair situations the guided algorithm starts from: weights of X_1 and X_2
#: plus their distance.  Each yields the maximal pairwise double-weight total.
BLESSED_PAIR_SITUATIONS = ((4, 4, 4), (4, 5, 3), (5, 4, 3), (5, 5, 4))

#: Reference double-weight totals of X_3 by class, the placement heuristic's
#: priority data.  Every class is verified exhaustively by the test suite;
#: classes in the 10 row admit no collision-free realization (each lands on a
#: forbidden square) and are kept for candidate accounting.
X3_DOUBLE_WEIGHT_TABLE = {
    SClass((4, 4, 5), (4, 5, 5)): 10,
    SClass((4, 5, 4), (3, 6, 5)): 10,
    SClass((5, 4, 4), (3, 5, 6)): 10,
    SClass((5, 5, 4), (4, 5, 5)): 10,
    SClass((4, 4, 6), (4, 4, 4)): 11,
    SClass((4, 4, 7), (4, 3, 3)): 11,
    SClass((4, 5, 6), (3, 4, 3)): 11,
    SClass((5, 4, 6), (3, 3, 4)): 11,
    SClass((4, 4, 4), (4, 4, 6)): 15,
    SClass((4, 4, 4), (4, 6, 4)): 15,
    SClass((4, 4, 5), (4, 3, 5)): 15,
    SClass((4, 4, 5), (4, 5, 3)): 15,
    SClass((4, 5, 4), (3, 4, 5)): 15,
    SClass((5, 4, 4), (3, 5, 4)): 15,
    SClass((4, 5, 4), (3, 6, 3)): 15,
    SClass((5, 4, 4), (3, 3, 6)): 15,
    SClass((4, 5, 5), (3, 5, 4)): 15,
    SClass((5, 4, 5), (3, 4, 5)): 15,
    SClass((5, 5, 4), (4, 3, 5)): 15,
    SClass((5, 5, 4), (4, 5, 3)): 15,
    SClass((4, 4, 4), (4, 4, 4)): 19,
    SClass((4, 4, 5), (4, 3, 3)): 19,
    SClass((4, 5, 4), (3, 4, 3)): 19,
    SClass((5, 4, 4), (3, 3, 4)): 19,
    SClass((4, 5, 5), (3, 3, 4)): 19,
    SClass((5, 4, 5), (3, 4, 3)): 19,
    SClass((5, 5, 4), (4, 3, 3)): 19,
}


@dataclass
class SearchStats:
    """Candidate-evaluation counters; part of the public search contract."""

    candidates_evaluated: int = 0
    placements_emitted: int = 0


def _weight_classes(n: int) -> dict[int, tuple[int, ...]]:
    return {w: tuple(sorted(x for x in range(1 << n) if weight(x) == w))
            for w in range(n + 1)}


@lru_cache(maxsize=8)
def _data_candidates(n: int) -> tuple[int, ...]:
    """Codes a data bit may occupy at all: weight >= 4 (forced by validity)."""
    return tuple(sorted(x for x in range(1 << n) if weight(x) >= 4))


def naive_search(n: int, d: int, stats: SearchStats | None = None) -> Iterator[Placement]:
    """Baseline: every ascending weight->=4 tuple, filtered by the oracle."""
    check_width(n)
    stats = stats if stats is not None else SearchStats()
    for combo in combinations(_data_candidates(n), d):
        stats.candidates_evaluated += 1
        if not _collides(combo, n):
            stats.placements_emitted += 1
            yield Placement(n, combo)


def _pairs_of_situation(n: int, w1: int, w2: int, dist: int) -> Iterator[tuple[int, int]]:
    classes = _weight_classes(n)
    for x1 in classes.get(w1, ()):
        for x2 in classes.get(w2, ()):
            if x2 != x1 and (x1 ^ x2).bit_count() == dist:
                yield x1, x2


@lru_cache(maxsize=8)
def triple_classes(n: int) -> tuple[tuple[SClass, int], ...]:
    """Every S-class realizable as a valid placement over a blessed pair,
    with its X_3 double-weight count, ordered by descending count then key.

    One representative pair per situation suffices for discovery: pairs of a
    situation are equivalent under coordinate permutation, and both class
    realizability and the count are permutation-invariant.
    """
    found: dict[SClass, int] = {}
    for w1, w2, dist in BLESSED_PAIR_SITUATIONS:
        pair = next(_pairs_of_situation(n, w1, w2, dist), None)
        if pair is None:
            continue
        x1, x2 = pair
        for x3 in range(1 << n):
            if x3 in (x1, x2) or weight(x3) < 4 or _collides((x1, x2, x3), n):
                continue
            cls = SClass((w1, w2, weight(x3)),
                         (dist, (x1 ^ x3).bit_count(), (x2 ^ x3).bit_count()))
            if cls not in found:
                found[cls] = double_weight_count(x3, (x1, x2), n)
    return tuple(sorted(found.items(), key=lambda kv: (-kv[1], kv[0].sort_key())))


def guided_search(
    n: int,
    d: int,
    sclass: SClass | None = None,
    stats: SearchStats | None = None,
) -> Iterator[Placement]:
    """Priority-ordered placement search.

    X_1 and X_2 are drawn from the blessed pair situations, X_3 candidates are
    visited class-by-class in descending double-weight priority and skip the
    forbidden squares, X_4 repeats the X_3 procedure against all placed bits.
    Every emitted placement passes :func:`is_valid`; emission order is
    deterministic.  Passing `sclass` pins the first three data bits to that
    descriptor (blessed or not), which is how census representatives for
    arbitrary classes are found.
    """
    check_width(n)
    if d < 1 or (n == 7 and d > 4):
        raise ValueError(f"unsupported data-bit count {d} for n={n}")
    stats = stats if stats is not None else SearchStats()

    if sclass is not None:
        if len(sclass.weights) != min(d, 3):
            raise ValueError(f"class {sclass.label} does not describe {d} data bits")
        yield from _class_pinned_search(n, d, sclass, stats)
        return

    if d == 1:
        for x1 in sorted(set(_weight_classes(n)[4]) | set(_weight_classes(n)[5])):
            stats.candidates_evaluated += 1
            stats.placements_emitted += 1
            yield Placement(n, (x1,))
        return

    if d == 2:
        for w1, w2, dist in BLESSED_PAIR_SITUATIONS:
            for x1, x2 in _pairs_of_situation(n, w1, w2, dist):
                stats.candidates_evaluated += 1
                if not _collides((x1, x2), n):
                    stats.placements_emitted += 1
                    yield Placement(n, (x1, x2))
        return

    for cls, _count in triple_classes(n):
        yield from _class_pinned_search(n, d, cls, stats)


def _class_pinned_search(n: int, d: int, cls: SClass, stats: SearchStats) -> Iterator[Placement]:
    w1, w2, w3 = (cls.weights + (None, None, None))[:3]
    d12, d13, d23 = (cls.distances + (None, None, None))[:3]
    classes = _weight_classes(n)
    table = _sides12(n)
    parity_all = parity_footprint(n).all
    for x1 in classes.get(w1, ()):
        stats.candidates_evaluated += 1
        for x2 in classes.get(w2, ()):
            if x2 == x1:
                continue
            stats.candidates_evaluated += 1
            if (x1 ^ x2).bit_count() != d12 or _collides((x1, x2), n):
                continue
            if d == 2:
                stats.placements_emitted += 1
                yield Placement(n, (x1, x2))
                continue
            blocked = parity_all | {x1, x2} | table[x1] | table[x2]
            marks = forbidden_squares(x1, x2, n)
            for x3 in classes.get(w3, ()):
                stats.candidates_evaluated += 1
                if (x1 ^ x3).bit_count() != d13 or (x2 ^ x3).bit_count() != d23:
                    continue
                if x3 in blocked or x3 in marks:
                    continue
                if _collides((x1, x2, x3), n):
                    continue
                if d == 3:
                    stats.placements_emitted += 1
                    yield Placement(n, (x1, x2, x3))
                else:
                    yield from _extend_with_x4(n, (x1, x2, x3), stats)


def _extend_with_x4(n: int, trio: tuple[int, int, int], stats: SearchStats) -> Iterator[Placement]:
    table = _sides12(n)
    blocked = set(parity_footprint(n).all)
    for x in trio:
        blocked.add(x)
        blocked |= table[x]
    for a, b in combinations(trio, 2):
        blocked |= forbidden_squares(a, b, n)
    candidates = []
    for x4 in _data_candidates(n):
        stats.candidates_evaluated += 1
        if x4 in blocked:
            continue
        candidates.append((-double_weight_count(x4, trio, n), x4))
    for _prio, x4 in sorted(candidates):
        if not _collides(trio + (x4,), n):
            stats.placements_emitted += 1
            yield Placement(n, trio + (x4,))


def permute_bits(p: Placement, perm: Sequence[int]) -> Placement:
    """Relabel parity coordinates: perm[k-1] is the new position of old bit k."""
    if sorted(perm) != list(range(1, p.n + 1)):
        raise ValueError("perm must be a permutation of 1..n")
    def remap(code: int) -> int:
        out = 0
        for k in range(1, p.n + 1):
            if code >> (k - 1) & 1:
                out |= 1 << (perm[k - 1] - 1)
        return out
    return Placement(p.n, tuple(remap(x) for x in p.data))


def reference_placements() -> dict[str, Placement]:
    """Canonical hand-checked placements used by the docs, fixtures and tests."""
    x1, x2 = 0b1101010, 0b1010110            # {2,4,6,7}, {2,3,5,7}
    return {
        "s44_4": Placement(7, (x1, x2)),
        "s445_433": Placement(7, (x1, x2, 0b1001111)),   # X_3 = {1,2,3,4,7}
        "s447_433": Placement(7, (x1, x2, 0b1111111)),   # X_3 = all ones
    }
