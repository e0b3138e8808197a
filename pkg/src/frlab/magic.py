"""Supermagic edge labelings and the access-variance results built on them.

On a regular graph a supermagic labeling (consecutive labels, equal vertex
sums) is exactly a labeling with zero access-variance, so these searches
double as MinVar certificates.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .labeling import variance
from .minps import mkr_value, mtnr_labeling
from .setsystem import Graph, complete, line_graph, m_copies, multipartite_parts, turan

DEFAULT_MAGIC_CAP = 16


class SearchInfeasible(RuntimeError):
    """The requested search lies beyond the supported size."""


def magic_cap() -> int:
    return int(os.environ.get("FRLAB_MAGIC_CAP", DEFAULT_MAGIC_CAP))


@dataclass(frozen=True)
class MagicVerdict:
    is_magic: bool
    index: int | None = None
    witness: tuple[int, int] | None = None

    def to_json(self) -> dict:
        return {
            "is_magic": self.is_magic,
            "index": self.index,
            "witness": list(self.witness) if self.witness else None,
        }


def vertex_sums(G: Graph, labels: Sequence[int]) -> list[int]:
    s = [0] * G.num_vertices
    for (u, v), lab in zip(G.edges, labels):
        s[u] += lab
        s[v] += lab
    return s


def check_supermagic(G: Graph, labels: Sequence[int]) -> MagicVerdict:
    if not G.is_simple:
        raise ValueError("supermagic labelings are defined on simple graphs")
    labels = [int(x) for x in labels]
    if len(labels) != len(G.edges):
        raise ValueError("one label per edge required")
    if labels:
        lo = min(labels)
        if sorted(labels) != list(range(lo, lo + len(labels))):
            raise ValueError("labels must be distinct consecutive integers")
    s = vertex_sums(G, labels)
    for v in range(1, G.num_vertices):
        if s[v] != s[0]:
            return MagicVerdict(False, witness=(0, v))
    return MagicVerdict(True, index=s[0] if s else 0)


def supermagic_search(G: Graph, offset: int = 0, cap: int | None = None) -> list[int] | None:
    """First supermagic labeling of a regular graph, or None if none exists.

    Edges are labeled in canonical order, each taking the smallest feasible
    unused label from [1+offset, |E|+offset]. Raises ``SearchInfeasible``
    above ``cap`` edges so that "too big" is never confused with "none".
    """
    cap = magic_cap() if cap is None else cap
    E = len(G.edges)
    if E > cap:
        raise SearchInfeasible(f"{E} edges exceeds the supermagic search cap {cap}")
    if not G.is_simple:
        raise ValueError("supermagic search needs a simple graph")
    d = G.regular_degree()
    if d is None:
        raise ValueError("supermagic search is implemented for regular graphs")
    lo, hi = 1 + offset, E + offset
    twice = d * (lo + hi)
    if twice % 2:
        return None
    lam = twice // 2

    n = G.num_vertices
    rem = G.degrees()
    part = [0] * n
    used = [False] * (E + 1)
    out = [0] * E

    def feasible(x: int) -> bool:
        need = lam - part[x]
        k = rem[x]
        if k == 0:
            return need == 0
        free = [lab for lab in range(lo, hi + 1) if not used[lab - lo]]
        return sum(free[:k]) <= need <= sum(free[-k:])

    def go(i: int) -> bool:
        if i == E:
            return True
        u, v = G.edges[i]
        for lab in range(lo, hi + 1):
            if used[lab - lo]:
                continue
            if part[u] + lab > lam or part[v] + lab > lam:
                break
            used[lab - lo] = True
            part[u] += lab
            part[v] += lab
            rem[u] -= 1
            rem[v] -= 1
            out[i] = lab
            if feasible(u) and feasible(v) and go(i + 1):
                return True
            used[lab - lo] = False
            part[u] -= lab
            part[v] -= lab
            rem[u] += 1
            rem[v] += 1
        return False

    return list(out) if go(0) else None


def ivanco_predicate(n: int, r: int) -> bool:
    """Whether the regular Turan graph T(n, r) is supermagic (Ivanco's characterization)."""
    if r < 2 or n % r:
        raise ValueError("need r >= 2 and r | n")
    if n == r:
        return n == 2 or (n >= 6 and n % 4 != 0)
    if n == 2 * r:
        return n >= 6
    return not (r % 4 == 0 and (n // r) % 2 == 1)


def compose(
    H1: Graph, sigma1: Sequence[int], H2: Graph, sigma2: Sequence[int]
) -> tuple[Graph, list[int]]:
    """Labeling of H1 + H2 whose access-variance equals that of (H2, sigma2).

    ``sigma1`` must be supermagic on H1 with labels 1..|E1|; it is shifted
    up by |E2| so that H2 keeps the labels 1..|E2|. The shift adds the same
    amount at every vertex because H1 is regular.
    """
    if H1.num_vertices != H2.num_vertices:
        raise ValueError("H1 and H2 must share the vertex set")
    if set(H1.edges) & set(H2.edges):
        raise ValueError("H1 and H2 share an edge")
    if H1.regular_degree() is None or H2.regular_degree() is None:
        raise ValueError("H1 and H2 must both be regular")
    e1, e2 = len(H1.edges), len(H2.edges)
    if sorted(sigma1) != list(range(1, e1 + 1)) or not check_supermagic(H1, sigma1).is_magic:
        raise ValueError("sigma1 must be a supermagic labeling of H1 by 1..|E1|")
    if sorted(sigma2) != list(range(1, e2 + 1)):
        raise ValueError("sigma2 must label H2 by 1..|E2|")
    lab = {e: s + e2 for e, s in zip(H1.edges, sigma1)}
    lab.update(zip(H2.edges, sigma2))
    G = Graph(H1.num_vertices, list(H1.edges) + list(H2.edges))
    return G, [lab[e] for e in G.edges]


# -- K_{4r} -------------------------------------------------------------------------------


def k4r_bounds(r: int) -> dict:
    """Bounds on the minimum access-variance of K_{4r}.

    The upper bound comes from splitting K_{4r} into r*K_4 plus the
    supermagic T(4r, r); the lower bound from the mean popularity having
    fractional part 1/2 at each of the 4r nodes.
    """
    if r < 1:
        raise ValueError("r must be positive")
    upper = 3 * r if r % 2 else 7 * r
    M = mkr_value(r, 3)
    M_expanded = Fraction(45 * r**3 + 36 * r**2 + (7 if r % 2 else 8) * r, 8)
    c = -r * (6 * r + 1) * (30 * r + 7)
    via_minps = 32 * M - 72 * r * r - 18 * r + c
    if M != M_expanded or via_minps != upper:
        raise ArithmeticError(f"K_4r bound identity fails at r={r}")
    return {"r": r, "upper": upper, "lower": r, "M_rK3": M, "c": c, "via_minps": via_minps}


def labeling_from_turan_union(S_graph: Graph, m: int, n: int, r: int) -> list[int]:
    """Block labeling of a graph whose line graph is m*T(n, r), from the optimal MinPS labeling."""
    L = line_graph(S_graph.as_set_system())
    comps = multipartite_parts(L)
    l = n // r
    if len(comps) != m or any(len(p) != r or any(len(x) != l for x in p) for p in comps):
        raise ValueError("line graph is not m disjoint copies of T(n, r)")
    runs = mtnr_labeling(m, n, r).labels
    out = [0] * L.num_vertices
    for j, parts in enumerate(comps):
        for i, part in enumerate(parts):
            base = j * n + i * l
            for s, vertex in enumerate(part):
                out[vertex] = runs[base + s]
    return out


def k4r_labeling(r: int) -> dict:
    """Edge labeling of K_{4r} meeting the upper bound; supported for r <= 2."""
    if r == 1:
        G = complete(4)
        labels = labeling_from_turan_union(G, 1, 6, 3)
    elif r == 2:
        H1 = turan(8, 2)
        sigma1 = supermagic_search(H1)
        if sigma1 is None:
            raise SearchInfeasible("no supermagic labeling of T(8,2) found")
        H2 = m_copies(complete(4), 2)
        sigma2 = labeling_from_turan_union(H2, 2, 6, 3)
        G, labels = compose(H1, sigma1, H2, sigma2)
    else:
        raise SearchInfeasible(
            "K_4r labeling needs a supermagic T(4r, r) labeling beyond the search cap for r >= 3"
        )
    var = variance(G, labels)
    bounds = k4r_bounds(r)
    return {
        "r": r,
        "graph": G.to_json(),
        "labels": labels,
        "variance": str(var),
        "upper": bounds["upper"],
        "lower": bounds["lower"],
        "within_bounds": bounds["lower"] <= var <= bounds["upper"],
    }
