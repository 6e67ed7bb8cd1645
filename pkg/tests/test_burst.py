"""Burst-safe transmission orderings for the 10-bit reference map."""

import random

import pytest

from kmap_ecc.burst import (Ordering, burst_triples, failing_window,
                            is_burst_safe, search_orderings)
from kmap_ecc.coverage import three_bit_coverage
from kmap_ecc.placement import permute_bits

QUOTED = (
    "X1,P7,P3,P6,X3,P2,P4,P1,P5,X2",
    "X1,P2,P5,X3,P4,P3,P1,P6,P7,X2",
    "X2,P5,X3,P2,P4,P3,P7,P6,P1,X1",
)


@pytest.fixture(scope="module")
def ref447_report(refs):
    return three_bit_coverage(refs["s447_433"])


def test_ordering_parse_and_label():
    o = Ordering.parse(QUOTED[0])
    assert o.symbols[0] == ("X", 1) and o.symbols[-1] == ("X", 2)
    assert o.label == QUOTED[0]
    assert Ordering.parse("X_1,P_7,P_3,P_6,X_3,P_2,P_4,P_1,P_5,X_2") == o


def test_burst_windows():
    o = Ordering.parse(QUOTED[0])
    windows = burst_triples(o)
    assert len(windows) == 8
    assert windows[0].label == "X_1P_3P_7"
    assert windows[-1].label == "X_2P_1P_5"


def test_reversal_keeps_window_multiset():
    o = Ordering.parse(QUOTED[1])
    assert sorted(w.label for w in burst_triples(o)) == \
           sorted(w.label for w in burst_triples(o.reversed_()))


@pytest.mark.parametrize("text", QUOTED)
def test_quoted_orderings_are_burst_safe(text, ref447_report):
    assert is_burst_safe(Ordering.parse(text), ref447_report)


def test_failing_window_is_named(ref447_report):
    # natural order is not burst safe; the first bad window is identified
    o = Ordering.parse("X1,X2,X3,P1,P2,P3,P4,P5,P6,P7")
    bad = failing_window(o, ref447_report)
    assert bad == 0
    assert burst_triples(o)[bad].label == "X_1X_2X_3"


def test_incomplete_ordering_rejected(ref447_report):
    with pytest.raises(ValueError):
        failing_window(Ordering.parse("X1,P7,P3"), ref447_report)


def test_census_shapes_and_counts(ref447_report):
    cs = search_orderings(ref447_report)
    assert cs.total == 640
    shapes = cs.shapes()
    assert shapes == tuple((0, k, 9) for k in range(1, 9))
    for g in cs.groups:
        assert is_burst_safe(g.representative, ref447_report)
        o = g.representative
        assert o.data_positions == g.shape


def test_census_reversal_closure(ref447_report):
    cs = search_orderings(ref447_report)
    by_shape = {}
    for g in cs.groups:
        by_shape[g.shape] = by_shape.get(g.shape, 0) + g.count
    for shape, count in by_shape.items():
        mirrored = tuple(sorted(9 - p for p in shape))
        assert by_shape.get(mirrored) == count


def test_census_windows_pairwise_distinct(ref447_report):
    cs = search_orderings(ref447_report)
    for g in cs.groups:
        windows = burst_triples(g.representative)
        assert len(set(windows)) == len(windows)


def test_burst_safety_survives_coordinate_relabeling(refs, ref447_report):
    rng = random.Random(11)
    for _ in range(5):
        perm = list(range(1, 8))
        rng.shuffle(perm)
        q = permute_bits(refs["s447_433"], perm)
        report_q = three_bit_coverage(q)
        for text in QUOTED:
            o = Ordering.parse(text)
            relabeled = Ordering(tuple(
                (kind, perm[idx - 1] if kind == "P" else idx)
                for kind, idx in o.symbols))
            assert is_burst_safe(relabeled, report_q)


def test_census_threads_deterministic(ref447_report):
    a = search_orderings(ref447_report, threads=1)
    b = search_orderings(ref447_report, threads=2)
    assert a == b
