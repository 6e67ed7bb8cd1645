"""Three-bit error analysis: coverage reports, the PPP impossibility check,
and the minimum-parity feasibility search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .kcode import check_width, weight
from .placement import (ErrorPattern, Placement, SClass, guided_search,
                        require_valid, _collides)
from .codec import covered_triples, iter_patterns
from .parallel import pmap

__all__ = [
    "CoverageReport", "three_bit_coverage", "CLASS_KEYS",
    "CENSUS_FAMILIES", "CensusRow", "census",
    "Theorem4Report", "theorem4_check",
    "MinParityReport", "min_parity_search", "full_coverage_search",
]

CLASS_KEYS = ("XXP", "PPP", "XPP", "XXX")


def _class_key(pat: ErrorPattern) -> str:
    return {2: "XXP", 0: "PPP", 1: "XPP", 3: "XXX"}[len(pat.data)]


@dataclass(frozen=True)
class CoverageReport:
    placement: Placement
    mode: str
    covered: tuple[tuple[ErrorPattern, int], ...]
    counts: Mapping[str, int]
    total: int

    def covered_patterns(self) -> frozenset[ErrorPattern]:
        return frozenset(pat for pat, _ in self.covered)

    def to_json(self) -> dict:
        return {
            "placement": self.placement.to_json(),
            "sclass": SClass.from_placement(self.placement).label,
            "mode": self.mode,
            "total": self.total,
            "counts": dict(self.counts),
            "covered": [{"pattern": pat.label, "syndrome": s} for pat, s in self.covered],
        }


def three_bit_coverage(p: Placement, mode: str = "strict") -> CoverageReport:
    """Census of correctable triples for a 3-data-bit placement.

    ``strict`` pairs each free square with the unique triple claiming it,
    with the all-data triple losing contested squares (the rule of
    :func:`kmap_ecc.codec.covered_triples`).  ``assignable`` instead counts
    every free square hit by at least one triple, crediting the first
    claimant in pattern order; it exists for comparison only and overstates
    what a decoder can actually correct.
    """
    if p.d != 3:
        raise ValueError("three-bit coverage is defined for 3-data-bit placements")
    require_valid(p)
    if mode == "strict":
        table = covered_triples(p)
    elif mode == "assignable":
        base = {0} | {pat.syndrome(p) for pat in iter_patterns(p, (1, 2))}
        table = {}
        for pat in iter_patterns(p, (3,)):
            s = pat.syndrome(p)
            if s not in base and s not in table:
                table[s] = pat
    else:
        raise ValueError(f"unknown coverage mode {mode!r}")
    covered = tuple(sorted(((pat, s) for s, pat in table.items()),
                           key=lambda kv: kv[0].sort_key()))
    counts = Counter(_class_key(pat) for pat, _ in covered)
    return CoverageReport(p, mode, covered,
                          {k: counts.get(k, 0) for k in CLASS_KEYS}, len(covered))


# ---------------------------------------------------------------------------
# census over the reference class families
# ---------------------------------------------------------------------------

#: The eight families of 3-data classes with maximal published interest,
#: one tuple of ordered-class labels per family.
CENSUS_FAMILIES = (
    ("S_444^444",),
    ("S_445^433", "S_454^343", "S_544^334"),
    ("S_455^334", "S_545^343", "S_554^433"),
    ("S_447^433", "S_474^343", "S_744^334"),
    ("S_456^343", "S_645^433", "S_564^334", "S_465^433", "S_546^334", "S_654^343"),
    ("S_446^444", "S_464^444", "S_644^444"),
    ("S_556^433", "S_565^343", "S_655^334"),
    ("S_445^435", "S_454^345", "S_544^354", "S_445^453", "S_454^543", "S_544^534"),
)


@dataclass(frozen=True)
class CensusRow:
    family: int
    sclass: str
    realizable: bool
    total: int
    counts: Mapping[str, int]
    placement: Placement | None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "class": self.sclass,
            "realizable": self.realizable,
            "total": self.total,
            **{k: self.counts.get(k, 0) for k in CLASS_KEYS},
        }


def _census_row(args) -> CensusRow:
    family, label, n, mode = args
    cls = SClass.parse(label)
    rep = next(guided_search(n, 3, sclass=cls), None)
    if rep is None:
        return CensusRow(family, label, False, 0, dict.fromkeys(CLASS_KEYS, 0), None)
    report = three_bit_coverage(rep, mode)
    return CensusRow(family, label, True, report.total, dict(report.counts), rep)


def census(n: int = 7, mode: str = "strict", full: bool = False,
           threads: int = 1) -> tuple[CensusRow, ...]:
    """One representative coverage report per listed class.

    With ``full`` the census instead walks every class reachable by the
    guided search and reports the whole landscape.
    """
    check_width(n)
    if full:
        from .placement import triple_classes
        labels = [(0, cls.label) for cls, _ in triple_classes(n)]
    else:
        labels = [(i + 1, lab) for i, fam in enumerate(CENSUS_FAMILIES) for lab in fam]
    rows = pmap(_census_row, [(fam, lab, n, mode) for fam, lab in labels], threads)
    return tuple(rows)


# ---------------------------------------------------------------------------
# theorem 4: all P_lP_mP_n triples cannot share a <=2 map at n=7
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Theorem4Report:
    n: int
    impossible: bool
    singles_checked: int
    triples_checked: int
    survivors: tuple[tuple[int, int, int], ...]

    def __bool__(self) -> bool:
        return self.impossible


def theorem4_check(n: int = 7) -> Theorem4Report:
    """Exhaustively confirm that no 3-data placement keeps all <=2-bit
    syndromes and all C(n,3) P_lP_mP_n squares simultaneously distinct."""
    check_width(n)
    units = [1 << b for b in range(n)]
    ppp = [a ^ b ^ c for a, b, c in combinations(units, 3)]
    singles = [x for x in range(1, 1 << n) if not _collides((x,), n)]
    survivors = []
    checked = 0
    for trio in combinations(singles, 3):
        checked += 1
        if _collides(trio, n):
            continue
        syndromes = _le2_syndromes(trio, n) + ppp
        if len(set(syndromes)) == len(syndromes):
            survivors.append(trio)
    return Theorem4Report(n, not survivors, len(singles), checked, tuple(survivors))


def _le2_syndromes(data, n: int) -> list[int]:
    codes = list(data) + [1 << b for b in range(n)]
    return [0] + codes + [a ^ b for a, b in combinations(codes, 2)]


# ---------------------------------------------------------------------------
# minimum-parity feasibility
# ---------------------------------------------------------------------------

def _first_collision_kind(data, n: int) -> tuple[str, str] | None:
    """None when every <=3-bit pattern owns a distinct syndrome, else the
    kinds of the first colliding pattern pair, e.g. ("XXP", "XPP")."""
    codes = list(data) + [1 << b for b in range(n)]
    d = len(data)
    def kind(idx):
        nx = sum(1 for i in idx if i < d)
        return "X" * nx + "P" * (len(idx) - nx)
    seen = {0: "zero"}
    for r in (1, 2, 3):
        for idx in combinations(range(len(codes)), r):
            s = 0
            for i in idx:
                s ^= codes[i]
            if s in seen:
                return (kind(idx), seen[s])
            seen[s] = kind(idx)
    return None


@dataclass(frozen=True)
class MinParityReport:
    n: int
    pruned: bool
    weight_candidates: int
    pairs_meeting_conditions: int
    triples_meeting_conditions: int
    covering_placements: int
    failure_kinds: Mapping[str, int]
    witness: tuple[int, ...] | None

    @property
    def infeasible(self) -> bool:
        return self.covering_placements == 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pruned": self.pruned,
            "weight_candidates": self.weight_candidates,
            "pairs_meeting_conditions": self.pairs_meeting_conditions,
            "triples_meeting_conditions": self.triples_meeting_conditions,
            "covering_placements": self.covering_placements,
            "infeasible": self.infeasible,
            "failure_kinds": dict(self.failure_kinds),
            "witness": list(self.witness) if self.witness else None,
        }


MAX_MIN_PARITY_WIDTH = 12


def min_parity_search(n: int, pruned: bool = True) -> MinParityReport:
    """Search for a 3-data placement whose map covers every <=3-bit error.

    The pruned mode applies the stated necessary conditions literally: every
    X_i in N_5, pairwise distance at least 5 (an exact distance of 5 is
    parity-impossible between two weight-5 codes, so the bound reading is the
    only one under which the conditions can be met at all).  All candidates
    meeting them fail, classified by the first colliding pattern pair.  The
    unpruned mode drops the weight restriction and proves n=8 and n=9
    infeasible outright while n=10 admits covering placements, the first of
    which is returned as witness.
    """
    if not 4 <= n <= MAX_MIN_PARITY_WIDTH:
        raise ValueError(f"min-parity search supports widths 4..{MAX_MIN_PARITY_WIDTH}")
    if pruned:
        return _pruned_min_parity(n)
    return _unpruned_min_parity(n)


def _pruned_min_parity(n: int) -> MinParityReport:
    n5 = [x for x in range(1 << n) if weight(x) == 5]
    neigh = {a: [b for b in n5 if b > a and (a ^ b).bit_count() >= 5] for a in n5}
    pairs = sum(len(v) for v in neigh.values())
    fails: Counter = Counter()
    covering = 0
    witness = None
    triples = 0
    for a in n5:
        for b in neigh[a]:
            bs = set(neigh[b])
            for c in neigh[a]:
                if c <= b or c not in bs:
                    continue
                triples += 1
                r = _first_collision_kind((a, b, c), n)
                if r is None:
                    covering += 1
                    witness = witness or (a, b, c)
                else:
                    fails["{}={}".format(*r)] += 1
    return MinParityReport(n, True, len(n5), pairs, triples, covering,
                           dict(sorted(fails.items())), witness)


def _unpruned_min_parity(n: int) -> MinParityReport:
    size = 1 << n
    singles = [x for x in range(size) if _first_collision_kind((x,), n) is None]
    pair_ok: dict[int, list[int]] = {a: [] for a in singles}
    for i, a in enumerate(singles):
        for b in singles[i + 1:]:
            if _first_collision_kind((a, b), n) is None:
                pair_ok[a].append(b)
    pairs = sum(len(v) for v in pair_ok.values())
    covering = 0
    witness = None
    triples = 0
    for a in singles:
        bs = pair_ok[a]
        for b in bs:
            cset = set(pair_ok[b])
            for c in bs:
                if c <= b or c not in cset:
                    continue
                triples += 1
                if _first_collision_kind((a, b, c), n) is None:
                    covering += 1
                    if witness is None:
                        witness = (a, b, c)
    return MinParityReport(n, False, len(singles), pairs, triples, covering, {}, witness)


def full_coverage_search(n: int, limit: int = 1) -> list[Placement]:
    """First `limit` 3-data placements covering every <=3-bit error, unpruned."""
    out = []
    size = 1 << n
    singles = [x for x in range(size) if _first_collision_kind((x,), n) is None]
    for i, a in enumerate(singles):
        for j in range(i + 1, len(singles)):
            b = singles[j]
            if _first_collision_kind((a, b), n) is not None:
                continue
            for c in singles[j + 1:]:
                if _first_collision_kind((a, b, c), n) is None:
                    out.append(Placement(n, (a, b, c)))
                    if len(out) >= limit:
                        return out
    return out
