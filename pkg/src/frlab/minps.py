"""Minimum product-sum (MinPS) vertex labelings.

For a graph G on theta vertices and a bijection f onto 1..theta, the
objective is ``sum over edges uv of f(u)*f(v)`` (each edge once, parallel
edges by multiplicity). The module has an exact branch-and-bound solver, a
swap-based local search, and the closed-form optimal labelings for complete
graphs, unions of complete graphs, Turan graphs, unions of Turan graphs and
cycles.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .setsystem import Graph, complete, cycle, m_copies, turan

DEFAULT_EXACT_CAP = 12


def exact_cap() -> int:
    return int(os.environ.get("FRLAB_EXACT_CAP", DEFAULT_EXACT_CAP))


@dataclass(frozen=True)
class SolveResult:
    value: int | float
    labels: tuple[int, ...]
    status: str  # "exact" | "heuristic" | "closed_form"
    nodes_explored: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        doc = {
            "value": self.value,
            "labels": list(self.labels),
            "status": self.status,
            "nodes_explored": self.nodes_explored,
        }
        doc.update(self.extra)
        return doc


def _check_labels(G: Graph, f: Sequence[int]) -> list[int]:
    f = [int(x) for x in f]
    if len(f) != G.num_vertices or sorted(f) != list(range(1, G.num_vertices + 1)):
        raise ValueError(f"labeling must be a permutation of [1, {G.num_vertices}]")
    return f


def product_sum(G: Graph, f: Sequence[int]) -> int:
    f = _check_labels(G, f)
    return sum(w * f[u] * f[v] for (u, v), w in zip(G.edges, G.multiplicity))


def neighbor_sums(G: Graph, f: Sequence[int]) -> list[int]:
    s = [0] * G.num_vertices
    for (u, v), w in zip(G.edges, G.multiplicity):
        s[u] += w * f[v]
        s[v] += w * f[u]
    return s


def dominance_check(G: Graph, f: Sequence[int]) -> list[tuple[int, int]]:
    """Non-adjacent pairs (u, v) with f(u) < f(v) but f(N(u)) < f(N(v)).

    Swapping the labels of such a pair strictly lowers the product sum, so
    an optimal labeling has none. An empty list does not imply optimality.
    """
    f = _check_labels(G, f)
    adj = G.adjacency()
    s = neighbor_sums(G, f)
    out = []
    for u, v in combinations(range(G.num_vertices), 2):
        if v in adj[u]:
            continue
        a, b = (u, v) if f[u] < f[v] else (v, u)
        if s[a] < s[b]:
            out.append((a, b))
    return out


def averaging_bound(G: Graph) -> Fraction:
    """Mean of the product sum over all theta! labelings of a d-regular graph."""
    d = G.regular_degree()
    if d is None:
        raise ValueError("averaging bound needs a regular graph")
    t = G.num_vertices
    return Fraction(d * (3 * t + 2) * t * (t + 1), 24)


# -- exact branch and bound ---------------------------------------------------------


class _Budget(Exception):
    pass


class _Solver:
    def __init__(self, G: Graph, budget: int | None):
        self.n = G.num_vertices
        self.adj = [[] for _ in range(self.n)]
        for (u, v), w in zip(G.edges, G.multiplicity):
            self.adj[u].append((v, w))
            self.adj[v].append((u, w))
        self.nonadj = [
            {y for y in range(self.n) if y != x and y not in {u for u, _ in self.adj[x]}}
            for x in range(self.n)
        ]
        self.budget = budget
        self.nodes = 0
        # pair_prefix[k][e]: sum of the e smallest products i*j, 1 <= i < j <= k
        self.pair_prefix = []
        for k in range(self.n + 1):
            prods = sorted(i * j for i, j in combinations(range(1, k + 1), 2))
            pre = [0]
            for p in prods:
                pre.append(pre[-1] + p)
            self.pair_prefix.append(pre)
        self._pair_cache: dict[tuple[int, int], int] = {}
        self.reset()

    def reset(self):
        n = self.n
        self.lab = [0] * n
        self.a = [0] * n  # weighted sum of assigned neighbour labels
        self.rem = [len(self.adj[x]) for x in range(n)]  # unassigned neighbours
        self.complete: list[int] = []
        self.euu = sum(len(x) for x in self.adj) // 2
        self.wuu = sum(w for x in self.adj for _, w in x) // 2

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Budget

    def assign(self, v: int, L: int) -> list[int]:
        """Place label L on v; returns vertices that became complete."""
        self.lab[v] = L
        newly = []
        for u, w in self.adj[v]:
            self.a[u] += w * L
            self.rem[u] -= 1
            if self.lab[u] == 0:
                self.euu -= 1
                self.wuu -= w
            elif self.rem[u] == 0:
                newly.append(u)
        if self.rem[v] == 0:
            newly.append(v)
        self.complete.extend(newly)
        return newly

    def unassign(self, v: int, newly: list[int]):
        L = self.lab[v]
        for u, w in self.adj[v]:
            self.a[u] -= w * L
            self.rem[u] += 1
            if self.lab[u] == 0:
                self.euu += 1
                self.wuu += w
        self.lab[v] = 0
        if newly:
            del self.complete[-len(newly):]

    def dominated(self, newly: list[int]) -> bool:
        lab, a = self.lab, self.a
        for x in newly:
            for y in self.complete:
                if y == x or y not in self.nonadj[x]:
                    continue
                if (lab[x] - lab[y]) * (a[x] - a[y]) > 0:
                    return True
        return False

    def linear_bound(self, labels_sorted: list[int]) -> int:
        """Rearrangement minimum of sum f(u)*a(u) over unassigned u."""
        acc = sorted((self.a[u] for u in range(self.n) if self.lab[u] == 0), reverse=True)
        return sum(x * y for x, y in zip(acc, labels_sorted))

    def pair_bound(self, labels_sorted: list[int], used_mask: int) -> int:
        if self.euu == 0:
            return 0
        key = (used_mask, self.euu)
        if key not in self._pair_cache:
            prods = sorted(x * y for x, y in combinations(labels_sorted, 2))
            self._pair_cache[key] = sum(prods[: self.euu])
        return self._pair_cache[key] + 2 * (self.wuu - self.euu)

    # phase 1: largest labels first, strict improvement only
    def minimise(self, best: int, best_lab: list[int]) -> tuple[int, list[int]]:
        self.best, self.best_lab = best, list(best_lab)
        self.reset()
        self._descend(self.n, 0)
        return self.best, self.best_lab

    def _descend(self, k: int, F: int):
        if k == 0:
            if F < self.best:
                self.best, self.best_lab = F, list(self.lab)
            return
        free = sorted((u for u in range(self.n) if self.lab[u] == 0), key=lambda u: (self.a[u], u))
        rest = list(range(1, k))
        for v in free:
            self.tick()
            F2 = F + k * self.a[v]
            newly = self.assign(v, k)
            if not (newly and self.dominated(newly)):
                lb = F2 + self.linear_bound(rest)
                if self.euu:
                    lb += self.pair_prefix[k - 1][self.euu] + 2 * (self.wuu - self.euu)
                if lb < self.best:
                    self._descend(k - 1, F2)
            self.unassign(v, newly)

    # phase 2: vertex order, increasing labels; the first labeling reaching
    # the optimum is the lexicographically smallest one
    def lexmin(self, target: int) -> list[int] | None:
        self.target = target
        self.reset()
        self.found = None
        self._lex(0, 0, 0)
        return self.found

    def _lex(self, i: int, F: int, used: int) -> bool:
        n = self.n
        if i == n:
            if F == self.target:
                self.found = list(self.lab)
                return True
            return False
        for L in range(1, n + 1):
            if used >> (L - 1) & 1:
                continue
            self.tick()
            F2 = F + L * self.a[i]
            newly = self.assign(i, L)
            used2 = used | (1 << (L - 1))
            ok = not (newly and self.dominated(newly))
            if ok:
                rest = [x for x in range(1, n + 1) if not used2 >> (x - 1) & 1]
                lb = F2 + self.linear_bound(rest) + self.pair_bound(rest, used2)
                if lb <= self.target and self._lex(i + 1, F2, used2):
                    self.unassign(i, newly)
                    return True
            self.unassign(i, newly)
        return False


class EnumerationCapError(ValueError):
    pass


def exact_minps(G: Graph, budget: int | None = None, cap: int | None = None) -> SolveResult:
    """Global MinPS by branch and bound.

    Returns the lexicographically smallest optimal labeling. Graphs with
    more than ``cap`` vertices are refused unless a node ``budget`` is
    given; if the budget runs out, the best labeling found so far comes
    back with status ``"heuristic"``.
    """
    cap = exact_cap() if cap is None else cap
    if G.num_vertices > cap and budget is None:
        raise EnumerationCapError(
            f"{G.num_vertices} vertices exceeds the exact-solver cap {cap}; pass a budget"
        )
    if G.num_vertices == 0:
        return SolveResult(0, (), "exact")
    seed = local_search(G, seed=0, max_iters=10_000, restarts=4)
    solver = _Solver(G, budget)
    try:
        value, _ = solver.minimise(int(seed.value) + 1, list(seed.labels))
        if value > seed.value:  # nothing strictly below seed+1 beyond the seed itself
            value = int(seed.value)
        labels = solver.lexmin(value)
    except _Budget:
        best = min(
            (seed.value, list(seed.labels)),
            (getattr(solver, "best", seed.value), getattr(solver, "best_lab", list(seed.labels))),
        )
        return SolveResult(int(best[0]), tuple(best[1]), "heuristic", solver.nodes)
    assert labels is not None and product_sum(G, labels) == value
    return SolveResult(value, tuple(labels), "exact", solver.nodes)


def brute_force_minps(G: Graph) -> tuple[int, tuple[int, ...]]:
    """Enumerate every labeling; lexicographically smallest optimum. Tiny graphs only."""
    from itertools import permutations

    best = None
    for perm in permutations(range(1, G.num_vertices + 1)):
        v = sum(w * perm[u] * perm[x] for (u, x), w in zip(G.edges, G.multiplicity))
        if best is None or v < best[0]:
            best = (v, perm)
    return best


# -- local search ----------------------------------------------------------------------


def local_search(
    G: Graph, seed: int = 0, max_iters: int = 10_000, restarts: int = 8
) -> SolveResult:
    """Steepest descent over pairwise label swaps with seeded random restarts.

    At a local optimum no non-adjacent pair violates the swap dominance
    condition. Among equal best values the lexicographically smallest
    labeling is kept.
    """
    n = G.num_vertices
    if n == 0:
        return SolveResult(0, (), "heuristic")
    rng = np.random.Generator(np.random.PCG64(seed))
    adj = G.adjacency()
    weight = [[adj[u].get(v, 0) for v in range(n)] for u in range(n)]
    best = None
    iters_total = 0
    for _ in range(max(1, restarts)):
        f = [int(x) + 1 for x in rng.permutation(n)]
        s = neighbor_sums(G, f)
        for _ in range(max_iters):
            iters_total += 1
            move, gain = None, 0
            for u in range(n):
                fu, su, wu = f[u], s[u], weight[u]
                for v in range(u + 1, n):
                    df = f[v] - fu
                    delta = df * (su - s[v]) - wu[v] * df * df
                    if delta < gain:
                        gain, move = delta, (u, v)
            if move is None:
                break
            u, v = move
            fu, fv = f[u], f[v]
            for x, w in adj[u].items():
                s[x] += w * (fv - fu)
            for x, w in adj[v].items():
                s[x] += w * (fu - fv)
            f[u], f[v] = fv, fu
        val = product_sum(G, f)
        if best is None or (val, f) < best:
            best = (val, list(f))
    return SolveResult(best[0], tuple(best[1]), "heuristic", iters_total)


# -- closed forms ---------------------------------------------------------------------------


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"closed form {x} is not an integer")
    return x.numerator


def complete_value(r: int) -> int:
    """MinPS of K_r: every labeling gives sum_{i<j} i*j."""
    return sum(i * j for i, j in combinations(range(1, r + 1), 2))


def turan_value(n: int, r: int) -> int:
    if r < 2 or n % r:
        raise ValueError("turan labeling needs r >= 2 and r | n")
    l = n // r
    sums = [sum(range(i * l + 1, (i + 1) * l + 1)) for i in range(r)]
    return sum(a * b for a, b in combinations(sums, 2))


def turan_labeling(n: int, r: int) -> SolveResult:
    """Part i of T(n, r) takes the i-th run of n/r consecutive labels."""
    value = turan_value(n, r)
    labels = tuple(range(1, n + 1))
    assert product_sum(turan(n, r), labels) == value
    return SolveResult(value, labels, "closed_form")


def mkr_value(m: int, r: int) -> int:
    if m < 1 or r < 1:
        raise ValueError("need m >= 1 and r >= 1")
    if r == 1:
        return 0
    N = m * r
    v = Fraction(m * r * r * (N + 1) ** 2, 8) - Fraction(N * (N + 1) * (2 * N + 1), 12)
    if r % 2 == 1 and m % 2 == 0:
        v += Fraction(m, 8)
    return _as_int(v)


def _even_part(m: int, r: int, i: int) -> list[int]:
    """Labels of copy i (1-based) when r is even: two mirrored runs of r/2."""
    h = r // 2
    return list(range((i - 1) * h + 1, i * h + 1)) + list(
        range(m * r + 1 - i * h, m * r - (i - 1) * h + 1)
    )


def mkr_parts(m: int, r: int) -> list[list[int]]:
    """Label set of each copy of K_r in an optimal labeling of m*K_r."""
    if m < 1 or r < 1:
        raise ValueError("need m >= 1 and r >= 1")
    if r == 1:
        return [[i] for i in range(1, m + 1)]
    if r % 2 == 0:
        return [_even_part(m, r, i) for i in range(1, m + 1)]
    base = r - 3  # even; its mirrored runs fill [1, (r-3)m]
    parts = []
    for i in range(1, m + 1):
        low = _even_part(m, base, i) if base else []
        if m % 2 == 1:
            if i <= (m + 1) // 2:
                extra = [base * m + i, ((2 * r - 3) * m - 1) // 2 + i, r * m + 2 - 2 * i]
            else:
                extra = [base * m + i, ((2 * r - 5) * m - 1) // 2 + i, (r + 1) * m + 2 - 2 * i]
        else:
            if i <= m // 2:
                extra = [base * m + i, (2 * r - 3) * m // 2 + i, r * m + 2 - 2 * i]
            else:
                extra = [base * m + i, (2 * r - 5) * m // 2 + i, (r + 1) * m + 1 - 2 * i]
        parts.append(sorted(low + extra))
    return parts


def mkr_labeling(m: int, r: int) -> SolveResult:
    """Copy i of K_r occupies vertices [i*r, (i+1)*r) and takes ``mkr_parts`` row i."""
    parts = mkr_parts(m, r)
    labels = tuple(x for p in parts for x in p)
    value = mkr_value(m, r)
    G = m_copies(complete(r), m) if r > 1 else Graph(m, [])
    got = product_sum(G, labels)
    if got != value:
        raise AssertionError(f"mK_r construction gives {got}, closed form {value}")
    return SolveResult(value, labels, "closed_form", extra={"copy_sums": [sum(p) for p in parts]})


def mtnr_value(m: int, n: int, r: int) -> int:
    if r < 2 or n % r:
        raise ValueError("need r >= 2 and r | n")
    l = n // r
    if l < 2:
        raise ValueError("n/r must be at least 2; use mkr_labeling for complete graphs")
    v = (
        Fraction(comb(r, 2) * m * l * l * (1 - l) ** 2, 4)
        + Fraction((l**3 - l**4) * r * m * (r * m + 1) * (r - 1), 4)
        + l**4 * mkr_value(m, r)
    )
    return _as_int(v)


def mtnr_labeling(m: int, n: int, r: int) -> SolveResult:
    """Optimal labeling of m disjoint copies of T(n, r).

    Part i of copy j receives the run [l(t-1)+1, l*t], where t is the
    label of vertex i of copy j in the optimal m*K_r labeling and l = n/r.
    """
    value = mtnr_value(m, n, r)
    l = n // r
    bar = mkr_labeling(m, r).labels
    labels = []
    for j in range(m):
        for i in range(r):
            t = bar[j * r + i]
            labels.extend(range(l * (t - 1) + 1, l * t + 1))
    got = product_sum(m_copies(turan(n, r), m), labels)
    if got != value:
        raise AssertionError(f"mT(n,r) construction gives {got}, closed form {value}")
    return SolveResult(value, tuple(labels), "closed_form")


def cycle_value(theta: int) -> int:
    if theta < 3:
        raise ValueError("cycle needs theta >= 3")
    k, odd = divmod(theta - 1, 2)
    if odd == 0:  # theta = 2k + 1
        return _as_int(Fraction(4 * k**3 + 12 * k**2 + 14 * k + 3, 3))
    k = (theta - 2) // 2  # theta = 2k + 2
    return _as_int(Fraction(4 * k**3 + 18 * k**2 + 29 * k + 12, 3))


def cycle_order(theta: int) -> list[int]:
    """Labels around an optimal cycle, starting at 1 toward its larger neighbour."""
    if theta < 3:
        raise ValueError("cycle needs theta >= 3")
    seq = [1, 2, 3] if theta % 2 else [2, 4, 1, 3]
    t = len(seq)
    while t < theta:
        seq = [x + 1 for x in seq]
        i = seq.index(2)
        seq = seq[i:] + seq[:i]
        if seq[1] == t + 1:
            seq = [seq[0]] + seq[1:][::-1]
        # seq now runs 2 ... t+1 and wraps back to 2
        seq = seq + [1, t + 2]
        t += 2
    i = seq.index(1)
    seq = seq[i:] + seq[:i]
    if seq[1] < seq[-1]:
        seq = [seq[0]] + seq[1:][::-1]
    return seq


def cycle_labeling(theta: int) -> SolveResult:
    labels = tuple(cycle_order(theta))
    value = cycle_value(theta)
    got = product_sum(cycle(theta), labels)
    if got != value:
        raise AssertionError(f"cycle construction gives {got}, closed form {value}")
    return SolveResult(value, labels, "closed_form")


def cycle_recursion_step(theta: int) -> int:
    """M(theta+2) - M(theta)."""
    return theta * theta + 4 * theta + 5


# -- Zipf-weighted Turan ------------------------------------------------------------------


def weighted_turan_labeling(n: int, r: int, beta: float) -> SolveResult:
    """Part k of T(n, r) takes the k-th run of n/r consecutive Zipf weights.

    Vertex v carries rank v+1, i.e. weight 1/(v+1)**beta; the value is the
    weighted product sum in floating point.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if r < 2 or n % r:
        raise ValueError("need r >= 2 and r | n")
    l = n // r
    weights = [1.0 / (v + 1) ** beta for v in range(n)]
    sums = [sum(weights[i * l:(i + 1) * l]) for i in range(r)]
    value = sum(a * b for a, b in combinations(sums, 2))
    return SolveResult(
        value, tuple(range(1, n + 1)), "closed_form", extra={"weights": weights, "beta": beta}
    )


def weighted_product_sum(G: Graph, weights: Sequence[float]) -> float:
    return sum(w * weights[u] * weights[v] for (u, v), w in zip(G.edges, G.multiplicity))
