from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from frlab import labeling, magic
from frlab.magic import (
    SearchInfeasible, check_supermagic, compose, ivanco_predicate, k4r_bounds, k4r_labeling,
    supermagic_search, vertex_sums,
)
from frlab.setsystem import Graph, complete, cycle, m_copies, turan


def test_check_examples():
    K6 = complete(6)
    lab = supermagic_search(K6)
    v = check_supermagic(K6, lab)
    assert v.is_magic and v.index == 40 and v.to_json()["index"] == 40
    bad = check_supermagic(complete(3), [1, 2, 3])
    assert not bad.is_magic and bad.witness == (0, 1)
    with pytest.raises(ValueError):
        check_supermagic(complete(3), [1, 2, 4])
    with pytest.raises(ValueError):
        check_supermagic(complete(3), [1, 1, 2])
    # an offset range is still consecutive
    assert check_supermagic(complete(2), [7]).is_magic


def test_search_results():
    assert supermagic_search(complete(2)) == [1]
    for G in (complete(3), complete(4), complete(5), cycle(4), cycle(5)):
        assert supermagic_search(G) is None
    lab = supermagic_search(turan(6, 3))
    assert check_supermagic(turan(6, 3), lab).index == 26
    lab = supermagic_search(turan(8, 2))
    assert check_supermagic(turan(8, 2), lab).index == 34


def test_search_offset():
    G = turan(6, 3)
    lab = supermagic_search(G, offset=10)
    assert sorted(lab) == list(range(11, 23))
    assert check_supermagic(G, lab).index == 4 * (11 + 22) // 2


def test_search_cap_is_distinct_from_none(monkeypatch):
    with pytest.raises(SearchInfeasible):
        supermagic_search(complete(7))
    with pytest.raises(SearchInfeasible):
        supermagic_search(complete(5), cap=5)
    monkeypatch.setenv("FRLAB_MAGIC_CAP", "20")
    assert magic.magic_cap() == 20
    with pytest.raises(ValueError):
        supermagic_search(Graph(3, [(0, 1), (1, 2)]))


def test_ivanco():
    assert ivanco_predicate(12, 4) is False
    assert ivanco_predicate(6, 6) and not ivanco_predicate(8, 8) and ivanco_predicate(2, 2)
    assert not ivanco_predicate(4, 2) and ivanco_predicate(6, 3)
    with pytest.raises(ValueError):
        ivanco_predicate(7, 3)


@pytest.mark.parametrize("n,r", [(2, 2), (3, 3), (4, 4), (4, 2)])
def test_ivanco_against_brute_force(n, r):
    G = complete(n) if n == r else turan(n, r)
    assert oracles.has_supermagic(G.num_vertices, G.edges) == ivanco_predicate(n, r)


def test_compose_k8():
    H1 = turan(8, 2)
    s1 = supermagic_search(H1)
    H2 = m_copies(complete(4), 2)
    s2 = [3, 1, 6, 5, 2, 4, 9, 7, 12, 11, 8, 10]
    G, lab = compose(H1, s1, H2, s2)
    assert G.edges == complete(8).edges
    assert labeling.variance(G, lab) == labeling.variance(H2, s2)


def test_compose_rejects():
    H1 = turan(8, 2)
    s1 = supermagic_search(H1)
    H2 = m_copies(complete(4), 2)
    s2 = list(range(1, 13))
    with pytest.raises(ValueError):
        compose(H1, list(range(1, 17)), H2, s2)  # not supermagic
    with pytest.raises(ValueError):
        compose(H1, s1, H1, s1)  # overlapping
    with pytest.raises(ValueError):
        compose(H1, s1, Graph(8, [(0, 1)]), [1])  # irregular


def test_compose_empty_h2():
    H1 = turan(6, 3)
    s1 = supermagic_search(H1)
    G, lab = compose(H1, s1, Graph(6, []), [])
    assert lab == s1 and labeling.variance(G, lab) == 0


def test_k4r_bounds_values():
    assert k4r_bounds(1)["upper"] == 3 and k4r_bounds(2)["upper"] == 14
    for r in range(1, 51):
        b = k4r_bounds(r)
        assert b["lower"] == r <= b["upper"]
        assert 32 * b["M_rK3"] - 72 * r * r - 18 * r - r * (6 * r + 1) * (30 * r + 7) == b["upper"]


def test_k4r_labeling():
    one = k4r_labeling(1)
    assert Fraction(one["variance"]) == 3 and one["within_bounds"]
    two = k4r_labeling(2)
    assert Fraction(two["variance"]) == 14 and two["within_bounds"]
    with pytest.raises(SearchInfeasible):
        k4r_labeling(3)


@settings(max_examples=40)
@given(st.sampled_from([turan(6, 3), complete(6), turan(6, 2)]), st.data())
def test_supermagic_means_zero_variance(G, data):
    lab = supermagic_search(G)
    perm = data.draw(st.permutations(range(len(G.edges))))
    shuffled = [lab[i] for i in perm]
    magic_now = check_supermagic(G, shuffled).is_magic
    assert magic_now == (labeling.variance(G, shuffled) == 0)
    assert len(set(vertex_sums(G, lab))) == 1
