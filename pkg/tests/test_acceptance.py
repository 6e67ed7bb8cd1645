"""Acceptance suite: one test (or parametrized group) per build criterion.

Every tolerance here is exact.  The terminal summary prints a PASS/FAIL
line per criterion (see conftest).  Criterion 6 carries target census
values that machine enumeration cannot reproduce in full under any uniform
uniqueness rule; the default interpretation is asserted as required and the
comparison table is printed by the companion documentation test.
"""

import json
import math
import os
import subprocess
import sys
import pytest

from kmap_ecc.codec import build_tables, covered_triples, decode, encode, inject, iter_patterns
from kmap_ecc.kcode import default_layout, weight
from kmap_ecc.placement import (SClass, SearchStats,
                                X3_DOUBLE_WEIGHT_TABLE, _collides,
                                double_weight_count, guided_search, is_valid,
                                naive_search, theorem1_overlap,
                                theorem2_overlap)
from kmap_ecc.coverage import (CENSUS_FAMILIES, census, min_parity_search,
                               theorem4_check, three_bit_coverage)
from kmap_ecc.burst import Ordering, is_burst_safe, search_orderings
from kmap_ecc.render import diff_grids, grid_from_csv, render_map

W4PLUS = [x for x in range(128) if weight(x) >= 4]


# --- criterion 1: single-placement double-weight counts -------------------

@pytest.mark.criterion(1, "single-placement double-weight counts")
def test_c1_single_counts_exhaustive():
    expected = {4: 10, 5: 10, 6: 0, 7: 0}
    checked = 0
    for code in W4PLUS:
        assert double_weight_count(code, (), 7) == expected[weight(code)]
        checked += 1
    assert checked == 35 + 21 + 7 + 1


# --- criterion 2: pair counts over all qualifying pairs -------------------

PAIR_COUNTS = {
    (4, 4, 4): 15, (4, 5, 3): 15, (4, 6, 4): 6, (4, 7, 3): 6,
    (5, 4, 3): 15, (5, 5, 4): 15, (5, 6, 3): 6,
}


@pytest.mark.criterion(2, "pairwise double-weight counts")
def test_c2_pair_counts_exhaustive():
    seen = {}
    for x1 in W4PLUS:
        for x2 in W4PLUS:
            if x2 == x1 or _collides((x1, x2), 7):
                continue
            key = (weight(x1), weight(x2), weight(x1 ^ x2))
            seen.setdefault(key, set()).add(double_weight_count(x2, (x1,), 7))
    for key, value in PAIR_COUNTS.items():
        assert seen[key] == {value}, (key, seen[key])
    assert not any({w1, w2} == {5, 7} for (w1, w2, _) in seen)


# --- criterion 3: the X_3 double-weight table ------------------------------

@pytest.mark.criterion(3, "X_3 double-weight table reproduction")
@pytest.mark.parametrize("cls,target", sorted(
    ((c, v) for c, v in X3_DOUBLE_WEIGHT_TABLE.items()),
    key=lambda kv: kv[0].sort_key()), ids=lambda v: v.label if isinstance(v, SClass) else str(v))
def test_c3_table_counts_exhaustive_within_class(cls, target):
    """Every geometric realization of a listed class (valid pair and an X_3
    candidate matching the descriptor) produces the table's count."""
    (w1, w2, w3), (d12, d13, d23) = cls.weights, cls.distances
    realizations = 0
    for x1 in W4PLUS:
        if weight(x1) != w1:
            continue
        for x2 in W4PLUS:
            if (x2 == x1 or weight(x2) != w2
                    or weight(x1 ^ x2) != d12 or _collides((x1, x2), 7)):
                continue
            for x3 in range(128):
                if (x3 in (x1, x2) or weight(x3) != w3
                        or weight(x1 ^ x3) != d13 or weight(x2 ^ x3) != d23):
                    continue
                realizations += 1
                assert double_weight_count(x3, (x1, x2), 7) == target
    assert realizations > 0


# --- criterion 4: theorems 1-3 ---------------------------------------------

@pytest.mark.criterion(4, "theorems 1-3 brute force")
def test_c4_theorems_1_2_3():
    pairs4 = pairs3 = 0
    for a in range(128):
        wa = weight(a)
        for b in range(128):
            d = weight(a ^ b)
            if d == 4:
                pairs4 += 1
                assert theorem1_overlap(a, b, 7) == 6
            if d == 3 and abs(weight(b) - wa) == 1:
                pairs3 += 1
                assert theorem2_overlap(a, b, 7) == 6
    assert pairs4 == 128 * math.comb(7, 4)
    assert pairs3 > 0
    for x1 in W4PLUS:
        for x2 in W4PLUS:
            if x2 <= x1 or _collides((x1, x2), 7):
                continue
            x12 = x1 ^ x2
            assert weight(x12 ^ x1) >= 2 and weight(x12 ^ x2) >= 2


# --- criterion 5: theorem 4 -------------------------------------------------

@pytest.mark.criterion(5, "theorem 4 impossibility")
def test_c5_theorem4():
    report = theorem4_check(7)
    assert report.impossible
    assert report.triples_checked == math.comb(64, 3)


# --- criterion 6: coverage census -------------------------------------------

#: target (total, XXP, PPP, XPP, XXX) per family
CENSUS_TARGETS = {
    1: (36, 9, 11, 15, 1),
    2: (45, 11, 13, 21, 0),
    3: (38, 11, 8, 19, 0),
    4: (49, 4, 21, 24, 0),
    5: (40, 4, 17, 19, 0),
    6: (39, 5, 17, 17, 0),
    7: (38, 5, 11, 22, 0),
    8: (37, 7, 13, 17, 0),
}


def _family_tuple(rows, family):
    keys = {(r.total, r.counts["XXP"], r.counts["PPP"], r.counts["XPP"],
             r.counts["XXX"]) for r in rows if r.family == family}
    assert len(keys) == 1, f"family {family} members disagree: {keys}"
    return next(iter(keys))


@pytest.fixture(scope="module")
def census_rows():
    return census(n=7, mode="strict")


@pytest.mark.criterion(6, "three-bit coverage census")
@pytest.mark.parametrize("family", sorted(CENSUS_TARGETS))
def test_c6_census_family(census_rows, family):
    computed = _family_tuple(census_rows, family)
    target = CENSUS_TARGETS[family]
    assert computed == target, (
        f"family {family} ({', '.join(CENSUS_FAMILIES[family - 1])}): "
        f"computed (total,XXP,PPP,XPP,XXX)={computed} vs target {target}; "
        "see test_c6_interpretation_comparison output for the per-class "
        "analysis of every counting rule")


#: machine truth for both implemented interpretations, frozen as regression
COMPUTED_STRICT = {
    1: (39, 9, 11, 18, 1), 2: (48, 11, 13, 23, 1), 3: (39, 11, 8, 19, 1),
    4: (49, 4, 21, 24, 0), 5: (40, 4, 17, 19, 0), 6: (39, 5, 17, 17, 0),
    7: (39, 5, 12, 22, 0), 8: (40, 7, 14, 19, 0),
}


@pytest.mark.criterion(6, "three-bit coverage census")
def test_c6_interpretation_comparison(census_rows):
    """Documents the per-family match/mismatch of each counting rule; the
    computed values themselves are pinned and must stay reproducible."""
    assign_rows = census(n=7, mode="assignable")
    print("\nfamily  target              strict              assignable-total")
    agree = 0
    for family in sorted(CENSUS_TARGETS):
        strict = _family_tuple(census_rows, family)
        assert strict == COMPUTED_STRICT[family]
        assign_total = {r.total for r in assign_rows if r.family == family}
        flag = "match" if strict == CENSUS_TARGETS[family] else "MISMATCH"
        agree += flag == "match"
        print(f"  {family}     {CENSUS_TARGETS[family]!s:<20}{strict!s:<20}"
              f"{sorted(assign_total)} {flag}")
    print(f"  {agree}/8 families agree under the strict rule; no uniform "
          "uniqueness rule can reproduce all eight targets: family 5 needs "
          "the PPP triple colliding with X_1X_2X_3 counted while family 8 "
          "needs the structurally identical one dropped")


# --- criterion 7: reference-grid reconstruction ------------------------------

@pytest.mark.criterion(7, "grid reconstruction against fixtures")
def test_c7_reference_grids(refs, fixture_dir):
    lay = default_layout(7)
    grid3 = render_map(refs["s445_433"])
    fixture3 = grid_from_csv((fixture_dir / "map_s445_433.csv").read_text(), lay)
    assert diff_grids(grid3, fixture3) == ()

    grid4 = render_map(refs["s447_433"], include_triples=True)
    fixture4 = grid_from_csv((fixture_dir / "map_s447_433_triples.csv").read_text(), lay)
    small = {k: v for k, v in grid4.cells.items() if v.count("_") <= 2}
    small_fixture = {k: v for k, v in fixture4.cells.items() if v.count("_") <= 2}
    assert small == small_fixture          # zero diffs on all <=2-error labels
    assert diff_grids(grid4, fixture4) == ()
    assert sum(1 for v in grid4.cells.values() if v.count("_") == 3) == 49


# --- criterion 8: codec round trips ------------------------------------------

@pytest.mark.criterion(8, "codec exhaustive round trip")
def test_c8_codec_round_trips(refs):
    p = refs["s447_433"]
    tables = build_tables(p, include_triples=True)
    small = list(iter_patterns(p, (1, 2)))
    assert len(small) == 55
    triples = list(covered_triples(p).values())
    assert len(triples) == 49
    for value in range(8):
        bits = [value >> i & 1 for i in range(3)]
        clean = encode(bits, p)
        for pat in small + triples:
            fixed, report = decode(inject(clean, pat), tables)
            assert report.status == "corrected" and fixed == clean

    p4 = next(guided_search(7, 4))
    tables4 = build_tables(p4)
    small4 = list(iter_patterns(p4, (1, 2)))
    assert len(small4) == 66
    for value in range(16):
        bits = [value >> i & 1 for i in range(4)]
        clean = encode(bits, p4)
        for pat in small4:
            fixed, report = decode(inject(clean, pat), tables4)
            assert report.status == "corrected" and fixed == clean


# --- criterion 9: burst orderings --------------------------------------------

@pytest.mark.criterion(9, "burst-safe orderings")
def test_c9_burst(refs):
    report = three_bit_coverage(refs["s447_433"])
    for text in ("X1,P7,P3,P6,X3,P2,P4,P1,P5,X2",
                 "X1,P2,P5,X3,P4,P3,P1,P6,P7,X2",
                 "X2,P5,X3,P2,P4,P3,P7,P6,P1,X1"):
        assert is_burst_safe(Ordering.parse(text), report)
    cs = search_orderings(report)
    shapes = set(cs.shapes())
    assert {(0, 4, 9), (0, 3, 9), (0, 2, 9)} <= shapes
    by_shape = {}
    for g in cs.groups:
        by_shape[g.shape] = by_shape.get(g.shape, 0) + g.count
    for shape, count in by_shape.items():
        mirrored = tuple(sorted(9 - p for p in shape))
        assert by_shape.get(mirrored) == count


# --- criterion 10: minimum parity search -------------------------------------

@pytest.mark.criterion(10, "min-parity infeasibility")
@pytest.mark.parametrize("n,expect_pairs", [(8, True), (9, True)])
def test_c10_min_parity_fast(n, expect_pairs):
    report = min_parity_search(n)
    assert report.infeasible
    if expect_pairs:
        assert report.pairs_meeting_conditions > 0


@pytest.mark.criterion(10, "min-parity infeasibility")
@pytest.mark.slow
def test_c10_min_parity_10():
    report = min_parity_search(10)
    assert report.infeasible
    assert report.triples_meeting_conditions > 0


# --- criterion 11: guided beats naive ----------------------------------------

@pytest.mark.criterion(11, "guided search evaluates fewer candidates")
@pytest.mark.parametrize("d", [3, 4])
def test_c11_counters(d):
    gs, ns = SearchStats(), SearchStats()
    gp = next(guided_search(7, d, stats=gs))
    np_ = next(naive_search(7, d, stats=ns))
    assert is_valid(gp) and is_valid(np_)
    assert gs.candidates_evaluated < ns.candidates_evaluated


# --- criterion 12: byte-identical CLI output ----------------------------------

SUBCOMMANDS = (
    ("search", "--d", "3", "--limit", "3"),
    ("coverage", "census"),
    ("coverage", "minparity", "--n", "8"),
    ("verify-theorems",),
    ("bench", "--d", "3"),
)


def _run(argv, hashseed, threads, extra=()):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed),
               KMAP_ECC_THREADS=str(threads))
    proc = subprocess.run([sys.executable, "-m", "kmap_ecc.cli", *argv, *extra],
                          capture_output=True, text=True, env=env, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


@pytest.mark.criterion(12, "deterministic output at any parallelism")
@pytest.mark.parametrize("argv", SUBCOMMANDS, ids=lambda a: " ".join(a))
def test_c12_determinism(argv):
    a = _run(argv, hashseed=101, threads=1)
    b = _run(argv, hashseed=202, threads=3)
    assert a and a == b


@pytest.mark.criterion(12, "deterministic output at any parallelism")
def test_c12_burst_search_determinism(refs, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(refs["s447_433"].to_json()))
    argv = ("burst", "search", "--placement", str(path))
    assert _run(argv, 7, 1) == _run(argv, 8, 4)
