"""Uniform set systems, (multi)graphs and the operations that relate them.

Blocks are stored as sorted tuples and the block list is sorted
lexicographically, so every labeling elsewhere in the package is a plain
sequence aligned with ``SetSystem.blocks`` (or ``Graph.edges``).
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

DEFAULT_INCIDENCE_CAP = 10**6


def _incidence_cap() -> int:
    return int(os.environ.get("FRLAB_INCIDENCE_CAP", DEFAULT_INCIDENCE_CAP))


@dataclass(frozen=True)
class SetSystem:
    num_points: int
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, num_points: int, blocks: Iterable[Iterable[int]]):
        canon = []
        for b in blocks:
            t = tuple(sorted(int(p) for p in b))
            if len(set(t)) != len(t):
                raise ValueError(f"block {t} repeats a point")
            if t and (t[0] < 0 or t[-1] >= num_points):
                raise ValueError(f"block {t} has a point outside [0, {num_points})")
            canon.append(t)
        canon.sort()
        if num_points * len(canon) > _incidence_cap():
            raise ValueError(
                f"incidence matrix {num_points}x{len(canon)} exceeds cap {_incidence_cap()}"
            )
        object.__setattr__(self, "num_points", int(num_points))
        object.__setattr__(self, "blocks", tuple(canon))

    @property
    def theta(self) -> int:
        return len(self.blocks)

    @property
    def rho(self) -> int | None:
        sizes = {len(b) for b in self.blocks}
        return sizes.pop() if len(sizes) == 1 else None

    def degrees(self) -> list[int]:
        deg = [0] * self.num_points
        for b in self.blocks:
            for p in b:
                deg[p] += 1
        return deg

    @property
    def alpha(self) -> int | None:
        degs = set(self.degrees())
        return degs.pop() if len(degs) == 1 else None

    def point_blocks(self) -> list[list[int]]:
        """For each point, the indices of the blocks containing it."""
        out: list[list[int]] = [[] for _ in range(self.num_points)]
        for j, b in enumerate(self.blocks):
            for p in b:
                out[p].append(j)
        return out

    def require_regular_uniform(self) -> tuple[int, int]:
        rho, alpha = self.rho, self.alpha
        if rho is None:
            raise ValueError("set system is not uniform")
        if alpha is None:
            raise ValueError("set system is not regular")
        return rho, alpha

    def to_json(self) -> dict:
        return {"num_points": self.num_points, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, doc: dict) -> "SetSystem":
        return cls(doc["num_points"], doc["blocks"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph without loops; parallel edges kept as multiplicities."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    multiplicity: tuple[int, ...] = field(default=())

    def __init__(
        self,
        num_vertices: int,
        edges: Iterable[Sequence[int]],
        multiplicity: Iterable[int] | None = None,
    ):
        edges = [tuple(e) for e in edges]
        mult = list(multiplicity) if multiplicity is not None else [1] * len(edges)
        if len(mult) != len(edges):
            raise ValueError("multiplicity length does not match edge count")
        merged: dict[tuple[int, int], int] = {}
        for (u, v), w in zip(edges, mult):
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge ({u}, {v}) outside [0, {num_vertices})")
            if w < 1:
                raise ValueError("multiplicities must be positive")
            key = (min(u, v), max(u, v))
            if key in merged:
                raise ValueError(f"duplicate edge {key}; use multiplicity instead")
            merged[key] = int(w)
        keys = sorted(merged)
        object.__setattr__(self, "num_vertices", int(num_vertices))
        object.__setattr__(self, "edges", tuple(keys))
        object.__setattr__(self, "multiplicity", tuple(merged[k] for k in keys))

    @property
    def is_simple(self) -> bool:
        return all(w == 1 for w in self.multiplicity)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for (u, v), w in zip(self.edges, self.multiplicity):
            deg[u] += w
            deg[v] += w
        return deg

    def regular_degree(self) -> int | None:
        degs = set(self.degrees())
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def adjacency(self) -> list[dict[int, int]]:
        """Neighbor -> multiplicity map for each vertex."""
        adj: list[dict[int, int]] = [{} for _ in range(self.num_vertices)]
        for (u, v), w in zip(self.edges, self.multiplicity):
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def components(self) -> list[list[int]]:
        adj = self.adjacency()
        seen = [False] * self.num_vertices
        comps = []
        for s in range(self.num_vertices):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def as_set_system(self) -> SetSystem:
        if not self.is_simple:
            raise ValueError("only simple graphs map to 2-uniform set systems")
        return SetSystem(self.num_vertices, self.edges)

    def to_json(self) -> dict:
        doc: dict = {"num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}
        if not self.is_simple:
            doc["multiplicity"] = list(self.multiplicity)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Graph":
        return cls(doc["num_vertices"], doc["edges"], doc.get("multiplicity"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def as_set_system(obj: SetSystem | Graph) -> SetSystem:
    return obj.as_set_system() if isinstance(obj, Graph) else obj


def as_graph(obj: SetSystem | Graph) -> Graph:
    if isinstance(obj, Graph):
        return obj
    if obj.rho != 2:
        raise ValueError("only 2-uniform set systems are graphs")
    return Graph(obj.num_points, obj.blocks)


def load_json(path: str | os.PathLike) -> SetSystem | Graph:
    """Read either JSON format; the key set decides which type is built."""
    with open(path) as fh:
        doc = json.load(fh)
    if "num_points" in doc:
        return SetSystem.from_json(doc)
    if "num_vertices" in doc:
        return Graph.from_json(doc)
    raise ValueError(f"{path}: neither a set system nor a graph document")


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    uniform: bool
    rho: int | None
    regular: bool
    alpha: int | None
    linear: bool
    nonlinear_witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def to_json(self) -> dict:
        return {
            "uniform": self.uniform,
            "rho": self.rho,
            "regular": self.regular,
            "alpha": self.alpha,
            "linear": self.linear,
            "nonlinear_witness": [list(b) for b in self.nonlinear_witness]
            if self.nonlinear_witness
            else None,
        }


def validate(S: SetSystem) -> ValidationReport:
    rho, alpha = S.rho, S.alpha
    witness = None
    for a, b in combinations(S.blocks, 2):
        if len(set(a) & set(b)) > 1:
            witness = (a, b)
            break
    return ValidationReport(
        uniform=rho is not None and rho >= 2,
        rho=rho,
        regular=alpha is not None,
        alpha=alpha,
        linear=witness is None,
        nonlinear_witness=witness,
    )


# -- structural operations -----------------------------------------------------


def incidence_matrix(S: SetSystem) -> list[list[int]]:
    """Binary n x theta matrix, row = point, column = block."""
    rows = [[0] * S.theta for _ in range(S.num_points)]
    for j, b in enumerate(S.blocks):
        for p in b:
            rows[p][j] = 1
    return rows


def dual_with_map(S: SetSystem) -> tuple[SetSystem, list[int]]:
    """Dual system plus the point of ``S`` behind each dual block.

    Point j of the dual is block j of ``S``. Dual blocks are re-sorted into
    canonical order, so block ``i`` of the dual is the block list of point
    ``point_of[i]`` of ``S``. Reading columns through ``point_of`` gives
    exactly ``I(S)^T``.
    """
    lists = S.point_blocks()
    point_of = sorted(range(S.num_points), key=lambda p: lists[p])
    return SetSystem(S.theta, lists), point_of


def dual(S: SetSystem) -> SetSystem:
    return dual_with_map(S)[0]


def dual_incidence_matrix(S: SetSystem) -> list[list[int]]:
    """I(S)^T, columns kept in the point order of ``S``."""
    return [list(col) for col in zip(*incidence_matrix(S))] if S.num_points else []


def relabel(obj: SetSystem | Graph, new_index: Sequence[int]) -> SetSystem | Graph:
    """Rename point/vertex ``i`` to ``new_index[i]``."""
    if sorted(new_index) != list(range(len(new_index))):
        raise ValueError("relabeling must be a permutation")
    if isinstance(obj, Graph):
        return Graph(
            obj.num_vertices,
            [(new_index[u], new_index[v]) for u, v in obj.edges],
            obj.multiplicity,
        )
    return SetSystem(obj.num_points, [[new_index[p] for p in b] for b in obj.blocks])


def line_graph(S: SetSystem) -> Graph:
    """One vertex per block, |e & e'| parallel edges between blocks e and e'."""
    edges, mult = [], []
    sets = [set(b) for b in S.blocks]
    for i, j in combinations(range(S.theta), 2):
        k = len(sets[i] & sets[j])
        if k:
            edges.append((i, j))
            mult.append(k)
    return Graph(S.theta, edges, mult)


def shadow2(S: SetSystem) -> Graph:
    pairs = {pair for b in S.blocks for pair in combinations(b, 2)}
    return Graph(S.num_points, sorted(pairs))


def girth(G: Graph) -> float:
    """Shortest cycle length by BFS from every vertex; ``math.inf`` for forests."""
    if not G.is_simple:
        raise ValueError("girth is defined here for simple graphs")
    adj = [list(nb) for nb in G.adjacency()]
    best = float("inf")
    for s in range(G.num_vertices):
        dist = [-1] * G.num_vertices
        parent = [-1] * G.num_vertices
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def multipartite_parts(G: Graph) -> list[list[list[int]]]:
    """Parts of each component, assuming every component is complete multipartite.

    Components are returned in order of their smallest vertex; within a
    component, parts are the classes of the non-adjacency relation.
    """
    adj = G.adjacency()
    out = []
    for comp in G.components():
        parts: list[list[int]] = []
        for v in comp:
            for part in parts:
                if part[0] not in adj[v]:
                    part.append(v)
                    break
            else:
                parts.append([v])
        for part in parts:
            for a, b in combinations(part, 2):
                if b in adj[a]:
                    raise ValueError("component is not complete multipartite")
            for other in parts:
                if other is not part and any(o not in adj[part[0]] for o in other):
                    raise ValueError("component is not complete multipartite")
        out.append(parts)
    return out


# -- generators ----------------------------------------------------------------


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(n, combinations(range(n), 2))


def turan(n: int, r: int) -> Graph:
    """T(n, r) with r | n; part i is the index range [i*n/r, (i+1)*n/r)."""
    if r < 2 or n % r:
        raise ValueError("turan(n, r) requires r >= 2 and r | n")
    size = n // r
    edges = [(u, v) for u, v in combinations(range(n), 2) if u // size != v // size]
    return Graph(n, edges)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def disjoint_union(parts: Sequence[SetSystem | Graph]) -> SetSystem | Graph:
    """Copies occupy consecutive index ranges, in the given order."""
    if not parts:
        raise ValueError("disjoint_union of nothing")
    if all(isinstance(p, Graph) for p in parts):
        edges, mult, off = [], [], 0
        for g in parts:
            edges += [(u + off, v + off) for u, v in g.edges]
            mult += list(g.multiplicity)
            off += g.num_vertices
        return Graph(off, edges, mult)
    blocks, off = [], 0
    for s in map(as_set_system, parts):
        blocks += [[p + off for p in b] for b in s.blocks]
        off += s.num_points
    return SetSystem(off, blocks)


def m_copies(base: SetSystem | Graph, m: int) -> SetSystem | Graph:
    if m < 1:
        raise ValueError("m_copies needs m >= 1")
    return disjoint_union([base] * m)


GENERATORS = {
    "complete": complete,
    "turan": turan,
    "cycle": cycle,
}


def generate(kind: str, *args) -> SetSystem | Graph:
    if kind in GENERATORS:
        return GENERATORS[kind](*args)
    if kind == "m_copies":
        return m_copies(*args)
    if kind == "disjoint_union":
        return disjoint_union(*args)
    raise ValueError(f"unknown generator {kind!r}")
