"""Transmission orderings whose 3-bit bursts are all correctable patterns."""

from __future__ import annotations

import re
from dataclasses import dataclass
from .coverage import CoverageReport
from .placement import ErrorPattern
from .parallel import pmap

__all__ = ["Ordering", "burst_triples", "is_burst_safe", "failing_window",
           "BurstGroup", "BurstCensus", "search_orderings"]

BURST_LENGTH = 3

_SYM = re.compile(r"([XP])_?(\d+)$")


@dataclass(frozen=True)
class Ordering:
    """A permutation of the code-bit identifiers, e.g. X1,P7,P3,...,X2."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("ordering repeats a code bit")

    @classmethod
    def parse(cls, text: str) -> "Ordering":
        syms = []
        for tok in text.replace(" ", "").split(","):
            m = _SYM.match(tok)
            if not m:
                raise ValueError(f"bad ordering token {tok!r}")
            syms.append((m.group(1), int(m.group(2))))
        return cls(tuple(syms))

    @property
    def label(self) -> str:
        return ",".join(f"{k}{i}" for k, i in self.symbols)

    def reversed_(self) -> "Ordering":
        return Ordering(self.symbols[::-1])

    @property
    def data_positions(self) -> tuple[int, ...]:
        return tuple(i for i, (kind, _) in enumerate(self.symbols) if kind == "X")

    @property
    def data_assignment(self) -> tuple[int, ...]:
        return tuple(idx for kind, idx in self.symbols if kind == "X")

    def check_complete(self, d: int, n: int) -> "Ordering":
        want = {("X", i) for i in range(1, d + 1)} | {("P", k) for k in range(1, n + 1)}
        if set(self.symbols) != want:
            raise ValueError(f"ordering must use X1..X{d} and P1..P{n} exactly once each")
        return self


def _window_pattern(window) -> ErrorPattern:
    return ErrorPattern(frozenset(i for k, i in window if k == "X"),
                        frozenset(i for k, i in window if k == "P"))


def burst_triples(o: Ordering) -> tuple[ErrorPattern, ...]:
    """The consecutive width-3 windows, linear (no wraparound)."""
    if len(o.symbols) < BURST_LENGTH:
        raise ValueError("ordering shorter than the burst length")
    return tuple(_window_pattern(o.symbols[i:i + BURST_LENGTH])
                 for i in range(len(o.symbols) - BURST_LENGTH + 1))


def failing_window(o: Ordering, report: CoverageReport) -> int | None:
    """Index of the first window that is not a covered pattern, else None."""
    o.check_complete(report.placement.d, report.placement.n)
    covered = report.covered_patterns()
    for i, pat in enumerate(burst_triples(o)):
        if pat not in covered:
            return i
    return None


def is_burst_safe(o: Ordering, report: CoverageReport) -> bool:
    return failing_window(o, report) is None


@dataclass(frozen=True)
class BurstGroup:
    shape: tuple[int, ...]        # sorted data positions
    assignment: tuple[int, ...]   # data identities in transmission order
    count: int
    representative: Ordering

    def to_json(self) -> dict:
        return {"shape": list(self.shape), "assignment": list(self.assignment),
                "count": self.count, "representative": self.representative.label}


@dataclass(frozen=True)
class BurstCensus:
    placement_json: dict
    total: int
    groups: tuple[BurstGroup, ...]

    def shapes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({g.shape for g in self.groups}))

    def to_json(self) -> dict:
        return {"placement": self.placement_json, "total": self.total,
                "groups": [g.to_json() for g in self.groups]}


def _dfs(prefix: list, remaining: list, covered, out: list) -> None:
    if len(prefix) >= BURST_LENGTH:
        if _window_pattern(prefix[-BURST_LENGTH:]) not in covered:
            return
    if not remaining:
        out.append(tuple(prefix))
        return
    for i, sym in enumerate(remaining):
        prefix.append(sym)
        _dfs(prefix, remaining[:i] + remaining[i + 1:], covered, out)
        prefix.pop()


def _search_part(args) -> list:
    first, rest, covered = args
    out: list = []
    _dfs([first], list(rest), covered, out)
    return out


def search_orderings(report: CoverageReport, threads: int = 1) -> BurstCensus:
    """Exhaustive search over all (d+n)! orderings with prefix pruning,
    grouped by (shape, data-identity assignment)."""
    p = report.placement
    symbols = ([("X", i) for i in range(1, p.d + 1)]
               + [("P", k) for k in range(1, p.n + 1)])
    covered = report.covered_patterns()
    parts = [(sym, tuple(s for s in symbols if s != sym), covered) for sym in symbols]
    survivors = [o for part in pmap(_search_part, parts, threads) for o in part]
    grouped: dict[tuple, list] = {}
    for sym_tuple in survivors:
        o = Ordering(sym_tuple)
        grouped.setdefault((o.data_positions, o.data_assignment), []).append(o)
    groups = []
    for (shape, assignment), orderings in sorted(grouped.items()):
        rep = min(orderings, key=lambda o: o.symbols)
        groups.append(BurstGroup(shape, assignment, len(orderings), rep))
    return BurstCensus(p.to_json(), len(survivors), tuple(groups))
