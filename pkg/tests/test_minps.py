from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from frlab import minps
from frlab.minps import (
    EnumerationCapError, averaging_bound, cycle_labeling, cycle_order, cycle_value,
    dominance_check, exact_minps, local_search, mkr_labeling, mkr_parts, mkr_value,
    mtnr_labeling, mtnr_value, product_sum, turan_labeling, turan_value, weighted_product_sum,
    weighted_turan_labeling,
)
from frlab.setsystem import Graph, complete, cycle, m_copies, turan


def test_product_sum_examples():
    assert product_sum(complete(3), [3, 1, 2]) == 11
    for p in permutations(range(1, 5)):
        assert product_sum(complete(4), p) == 35
    assert product_sum(cycle(4), [2, 4, 1, 3]) == 21
    with pytest.raises(ValueError):
        product_sum(cycle(4), [1, 1, 2, 3])


def test_product_sum_counts_multiplicity():
    G = Graph(3, [(0, 1), (1, 2)], multiplicity=[2, 1])
    assert product_sum(G, [1, 2, 3]) == 2 * 2 + 6


@pytest.mark.parametrize("G,value", [(cycle(5), 37), (cycle(6), 58), (turan(4, 2), 21), (turan(6, 3), 131)])
def test_exact_examples(G, value):
    res = exact_minps(G)
    assert res.status == "exact" and res.value == value
    assert res == exact_minps(G)  # deterministic
    assert dominance_check(G, res.labels) == []


def test_exact_cap_and_budget(monkeypatch):
    G = cycle(14)
    with pytest.raises(EnumerationCapError):
        exact_minps(G)
    monkeypatch.setenv("FRLAB_EXACT_CAP", "4")
    with pytest.raises(EnumerationCapError):
        exact_minps(cycle(5))
    res = exact_minps(cycle(10), budget=5, cap=4)
    assert res.status == "heuristic"
    assert res.value == product_sum(cycle(10), res.labels) >= 224


def test_local_search():
    assert local_search(complete(4)).value == 35
    runs = [local_search(cycle(5), seed=s, restarts=1).value for s in range(10)]
    assert min(runs) == 37 and all(v >= 37 for v in runs)
    assert local_search(cycle(7), seed=3) == local_search(cycle(7), seed=3)


def test_averaging_examples():
    assert averaging_bound(cycle(4)) == Fraction(70, 3)
    assert averaging_bound(cycle(3)) == 11
    assert averaging_bound(complete(4)) == 35
    with pytest.raises(ValueError):
        averaging_bound(Graph(3, [(0, 1), (1, 2)]))


def test_turan_closed_form():
    assert turan_value(4, 2) == 21 and turan_value(6, 3) == 131
    assert turan_labeling(6, 3).labels == (1, 2, 3, 4, 5, 6)
    assert turan_value(5, 5) == sum(i * j for i, j in combinations(range(1, 6), 2))
    with pytest.raises(ValueError):
        turan_labeling(6, 4)
    for n, r in [(6, 2), (8, 2), (8, 4), (9, 3)]:
        assert turan_value(n, r) == exact_minps(turan(n, r)).value


def test_mkr_examples():
    assert sorted(map(sorted, mkr_parts(2, 2))) == [[1, 4], [2, 3]]
    assert mkr_value(2, 2) == 10
    res = mkr_labeling(3, 3)
    assert res.value == 195 and res.extra["copy_sums"] == [15, 15, 15]
    res = mkr_labeling(2, 3)
    assert res.value == 65 and sorted(res.extra["copy_sums"]) == [10, 11]
    assert mkr_value(5, 1) == 0
    assert mkr_labeling(1, 4).value == 35


def test_mtnr_examples():
    assert mtnr_value(1, 6, 3) == 131 == mtnr_labeling(1, 6, 3).value
    assert mtnr_value(2, 4, 2) == exact_minps(m_copies(turan(4, 2), 2)).value
    for r in range(1, 6):
        assert mtnr_value(r, 6, 3) == 16 * mkr_value(r, 3) - 36 * r * r - 9 * r
    with pytest.raises(ValueError):
        mtnr_labeling(2, 3, 3)  # l = 1
    with pytest.raises(ValueError):
        mtnr_labeling(2, 7, 3)


def test_mtnr_labeling_is_valid_on_graph():
    for m, n, r in [(2, 4, 2), (3, 6, 3), (2, 8, 4), (2, 6, 2)]:
        G = m_copies(turan(n, r), m)
        res = mtnr_labeling(m, n, r)
        assert product_sum(G, res.labels) == res.value


def test_cycle_examples():
    # (2,4,1,3) read from label 1 toward its larger neighbour
    assert cycle_order(4) == [1, 4, 2, 3]
    assert cycle_order(5) == [1, 5, 2, 3, 4]
    assert cycle_labeling(5).value == 37 and cycle_labeling(7).value == 87
    assert cycle_value(4) == 21
    for k in range(1, 8):
        assert cycle_value(2 * k + 1) == (4 * k**3 + 12 * k**2 + 14 * k + 3) // 3
        assert cycle_value(2 * k + 2) == (4 * k**3 + 18 * k**2 + 29 * k + 12) // 3
    with pytest.raises(ValueError):
        cycle_labeling(2)


@pytest.mark.parametrize("theta", range(3, 30))
def test_cycle_labeling_properties(theta):
    res = cycle_labeling(theta)
    lab = res.labels
    assert sorted(lab) == list(range(1, theta + 1))
    assert product_sum(cycle(theta), lab) == cycle_value(theta)
    assert lab[0] == 1 and lab[1] == theta
    assert min(lab[i] + lab[(i + 1) % theta] for i in range(theta)) == theta


def test_dominance_examples():
    assert dominance_check(cycle(4), [1, 2, 3, 4]) == []
    assert product_sum(cycle(4), [1, 2, 3, 4]) == 24 > 21
    assert dominance_check(complete(5), [5, 4, 3, 2, 1]) == []
    # labels 1 and 4 are non-adjacent; label 1 sees 2+5, label 4 sees 3+5
    assert dominance_check(cycle(5), [1, 2, 3, 4, 5]) == [(0, 3), (1, 3), (1, 4)]


def test_weighted_turan():
    res = weighted_turan_labeling(4, 2, 1.0)
    assert math.isclose(res.value, 1.5 * (7 / 12))
    assert math.isclose(res.value, weighted_product_sum(turan(4, 2), res.extra["weights"]))
    tiny = weighted_turan_labeling(6, 3, 1e-9)
    assert math.isclose(tiny.value, 3 * 4, rel_tol=1e-6)
    with pytest.raises(ValueError):
        weighted_turan_labeling(4, 2, 0)
    for n, r in [(4, 2), (6, 3), (6, 2)]:
        w = [1.0 / (v + 1) for v in range(n)]
        G = turan(n, r)
        best = min(weighted_product_sum(G, [w[i] for i in p]) for p in permutations(range(n)))
        assert math.isclose(weighted_turan_labeling(n, r, 1.0).value, best)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 7))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph(n, edges)


@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_exact_matches_brute_force(G):
    res = exact_minps(G)
    value, lab = minps.brute_force_minps(G)
    assert res.status == "exact"
    assert res.value == value == oracles.minps(G.num_vertices, G.edges)
    assert res.labels == lab  # both return the lexicographically smallest optimum
    assert dominance_check(G, res.labels) == []


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.integers(0, 1000))
def test_local_search_never_below_optimum(G, seed):
    res = local_search(G, seed=seed, restarts=2)
    assert res.value >= exact_minps(G).value
    assert res.value == product_sum(G, res.labels)
    assert dominance_check(G, res.labels) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(2, 12))
def test_mkr_construction(m, r):
    if m * r > 60:
        return
    res = mkr_labeling(m, r)
    G = m_copies(complete(r), m)
    assert product_sum(G, res.labels) == res.value == mkr_value(m, r)
    sums = res.extra["copy_sums"]
    assert max(sums) - min(sums) <= 1
