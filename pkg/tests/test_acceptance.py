"""Acceptance criteria, one test each; the terminal summary prints a PASS/FAIL line per criterion."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest

import oracles
from frlab import dress, frcode, labeling, magic, minps
from frlab.setsystem import Graph, SetSystem, complete, cycle, dual, m_copies, turan
from frlab.verify import K4_SIGMA1, K4_SIGMA2, K8_SIGMA1_MAP, K8_SIGMA2_MAP, k8_labels


@pytest.mark.acceptance("AC1", "K4 worked example: popularity, sums, variance 3 for both labelings")
def test_ac1_k4_worked_example():
    K4 = complete(4)
    assert labeling.popularity(K4, K4_SIGMA1) == [10, 10, 10, 12]
    assert labeling.popularity(K4, K4_SIGMA2) == [9, 11, 11, 11]
    assert (labeling.minsum(K4, K4_SIGMA1), labeling.maxsum(K4, K4_SIGMA1)) == (10, 12)
    assert (labeling.minsum(K4, K4_SIGMA2), labeling.maxsum(K4, K4_SIGMA2)) == (9, 11)
    for s in (K4_SIGMA1, K4_SIGMA2):
        assert labeling.variance(K4, s) == 3 == oracles.variance(4, K4.edges, s)


@pytest.mark.acceptance("AC2", "K8 worked example: equal minsum 101, variances 8 and 4")
def test_ac2_k8_worked_example():
    K8 = complete(8)
    s1, s2 = k8_labels(K8_SIGMA1_MAP), k8_labels(K8_SIGMA2_MAP)
    assert sorted(s1) == sorted(s2) == list(range(1, 29))
    assert labeling.minsum(K8, s1) == labeling.minsum(K8, s2) == 101
    assert labeling.variance(K8, s1) == 8 == oracles.variance(8, K8.edges, s1)
    assert labeling.variance(K8, s2) == 4 == oracles.variance(8, K8.edges, s2)


AC3_SYSTEMS = {
    "K4": complete(4).as_set_system(),
    "C5": cycle(5).as_set_system(),
    "T(6,3)": turan(6, 3).as_set_system(),
    "dual K4": dual(complete(4).as_set_system()),
    "non-linear": SetSystem(6, [[0, 1, 2], [0, 1, 3], [2, 4, 5], [3, 4, 5]]),
}


@pytest.mark.acceptance("AC3", "variance equals the line-graph quadratic form (1000 random labelings)")
def test_ac3_quadratic_identity():
    rng = random.Random(12345)
    systems = list(AC3_SYSTEMS.values())
    for i in range(1000):
        S = systems[i % len(systems)]
        sigma = rng.sample(range(1, S.theta + 1), S.theta)
        direct = oracles.variance(S.num_points, S.blocks, sigma)
        assert labeling.quadratic_variance(S, sigma) == direct
        assert labeling.variance(S, sigma) == direct


CYCLE_OPTIMA = {3: 11, 4: 21, 5: 37, 6: 58, 7: 87, 8: 123, 9: 169, 10: 224}


@pytest.mark.acceptance("AC4", "cycle MinPS optima for theta 3..10 and the recursion")
def test_ac4_cycles():
    for t, expected in CYCLE_OPTIMA.items():
        G = cycle(t)
        assert oracles.minps(t, G.edges) == expected
        res = minps.exact_minps(G)
        assert res.status == "exact" and res.value == expected
        cl = minps.cycle_labeling(t)
        assert cl.value == minps.cycle_value(t) == expected
        assert minps.product_sum(G, cl.labels) == expected
        lab = cl.labels
        pairs = [(lab[i], lab[(i + 1) % t]) for i in range(t)]
        assert any({a, b} == {1, t} for a, b in pairs)
        assert min(a + b for a, b in pairs) == t  # MaxMinSum optimum on the cycle
    for t in range(3, 9):
        assert minps.cycle_value(t + 2) == minps.cycle_value(t) + t * t + 4 * t + 5


@pytest.mark.acceptance("AC5", "mK_r and mT(n,r) closed forms against brute force")
def test_ac5_unions():
    for m in range(1, 10):
        for r in range(2, 10):
            if m * r > 9:
                continue
            G = m_copies(complete(r), m)
            want = oracles.minps(G.num_vertices, G.edges)
            res = minps.mkr_labeling(m, r)
            assert res.value == minps.mkr_value(m, r) == want
            assert minps.product_sum(G, res.labels) == want
    G = m_copies(turan(4, 2), 2)
    assert minps.mtnr_labeling(2, 4, 2).value == oracles.minps(8, G.edges) == 122
    assert minps.mtnr_value(1, 6, 3) == oracles.minps(6, turan(6, 3).edges) == 131
    for m in range(1, 101):
        for r in range(2, 101 // m + 1):
            assert isinstance(minps.mkr_value(m, r), int)
            assert sorted(x for p in minps.mkr_parts(m, r) for x in p) == list(range(1, m * r + 1))


@pytest.mark.acceptance("AC6", "averaging bound equals the mean over all labelings")
def test_ac6_averaging_bound():
    for G in (cycle(4), complete(4), cycle(5), cycle(6), turan(6, 3)):
        n = G.num_vertices
        values = [sum(p[u] * p[v] for u, v in G.edges) for p in permutations(range(1, n + 1))]
        mean = Fraction(sum(values), len(values))
        assert minps.averaging_bound(G) == mean
        assert min(values) <= mean


@pytest.mark.acceptance("AC7", "supermagic search agrees with brute force and the Ivanco predicate")
def test_ac7_supermagic():
    for G, lam in ((complete(6), 40), (turan(6, 3), 26)):
        lab = magic.supermagic_search(G)
        assert lab is not None
        v = magic.check_supermagic(G, lab)
        assert v.is_magic and v.index == lam
    for G in (complete(3), complete(4), complete(5), cycle(4)):
        assert magic.supermagic_search(G) is None
        if len(G.edges) <= 10:
            assert not oracles.has_supermagic(G.num_vertices, G.edges)
    for n, r in [(2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (4, 2), (6, 2), (6, 3), (8, 2)]:
        G = complete(n) if n == r else turan(n, r)
        assert (magic.supermagic_search(G) is not None) == magic.ivanco_predicate(n, r)
    assert magic.ivanco_predicate(12, 4) is False


@pytest.mark.acceptance("AC8", "K_4r variance bounds, identity and the composed K8 labeling")
def test_ac8_k4r():
    for r in range(1, 51):
        b = magic.k4r_bounds(r)
        assert b["upper"] == (3 * r if r % 2 else 7 * r) == b["via_minps"]
    K4 = complete(4)
    assert oracles.min_variance(4, K4.edges) == 3
    doc = magic.k4r_labeling(2)
    var = Fraction(doc["variance"])
    G = Graph.from_json(doc["graph"])
    assert G.edges == complete(8).edges
    assert var == oracles.variance(8, G.edges, doc["labels"])
    assert 2 <= var <= 14


@pytest.mark.acceptance("AC9", "file-size bounds and k-optimality certificates")
def test_ac9_bounds():
    for n, a, rho in [(4, 3, 2), (6, 4, 2), (6, 2, 2), (7, 3, 3)]:
        theta = n * a // rho
        for k in range(1, n):
            b1 = theta * (1 - Fraction(len(list(combinations(range(n - rho), k))), len(list(combinations(range(n), k)))))
            assert frcode.bound_singleton(n, k, a, rho) == int(b1)
    # recursive bound unrolled by hand for n=6, alpha=4, rho=2: 4, 7, 9, 11, 12
    assert [frcode.bound_recursive(6, k, 4, 2) for k in range(1, 6)] == [4, 7, 9, 11, 12]
    for G, kmax in ((turan(6, 3), 4), (cycle(6), 5)):
        C = frcode.from_set_system(G.as_set_system())
        rep = frcode.optimality_report(C, kmax)
        for row in rep.rows:
            assert row.M == oracles.file_size([set(x) for x in C.nodes], row.k)
            assert row.certified


@pytest.mark.acceptance("AC10", "DRESS pipeline: every single failure repaired with 3 transfers, every pair reconstructs")
def test_ac10_dress():
    fr = frcode.from_set_system(complete(4).as_set_system())
    code = dress.build(fr, 5, k=2)
    data = [17, 0, 255, 3, 128]
    stored = dress.place(code, dress.mds_encode(code, data))
    for j in range(4):
        damaged = list(stored)
        damaged[j] = None
        rec, log = dress.repair_node(code, damaged, j)
        assert rec == stored[j] and len(log) == 3
        assert len({h for h, _ in log}) == 3  # one symbol per helper
        damaged[j] = rec
        for pair in combinations(range(4), 2):
            assert dress.reconstruct(code, {i: damaged[i] for i in pair}) == data


@pytest.mark.acceptance("AC11", "workload loads converge to popularity within 3 SE; output is reproducible")
def test_ac11_workload():
    K4 = complete(4)
    fr = frcode.from_set_system(K4.as_set_system())
    N = 10**6
    out = dress.workload_sim(fr, K4_SIGMA1, N, seed=99)
    total = fr.theta * (fr.theta + 1) // 2
    for load, p in zip(out["loads"], labeling.popularity(K4, K4_SIGMA1)):
        q = p / total
        se = (q * (1 - q) / N) ** 0.5 / fr.rho
        assert abs(load / (fr.rho * N) - q / fr.rho) <= 3 * se
    again = dress.workload_sim(fr, K4_SIGMA1, N, seed=99)
    assert json.dumps(out, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_verify_suite_all_pass():
    from frlab.verify import run_suite

    rows = run_suite()
    assert [r["id"] for r in rows] == [f"AC{i}" for i in range(1, 12)]
    assert all(r["passed"] for r in rows), [r for r in rows if not r["passed"]]
