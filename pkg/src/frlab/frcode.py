"""Fractional repetition codes built from regular uniform set systems.

A node of the code is a point of the set system; it stores the indices of
the blocks through that point. The file size a code supports when any k
nodes must reconstruct is ``M(k) = min over k-subsets of |union of nodes|``.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .setsystem import SetSystem, incidence_matrix

DEFAULT_SUBSET_CAP = 10**7


class EnumerationCapError(ValueError):
    """Exhaustive enumeration would exceed the configured cap."""


def subset_cap() -> int:
    return int(os.environ.get("FRLAB_SUBSET_CAP", DEFAULT_SUBSET_CAP))


@dataclass(frozen=True)
class FrCode:
    n: int
    alpha: int
    rho: int
    theta: int
    nodes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.nodes) != self.n:
            raise ValueError(f"expected {self.n} nodes, got {len(self.nodes)}")
        if self.n * self.alpha != self.theta * self.rho:
            raise ValueError("n*alpha must equal theta*rho")
        counts = [0] * self.theta
        for node in self.nodes:
            if len(set(node)) != self.alpha:
                raise ValueError(f"node {node} does not hold exactly alpha={self.alpha} symbols")
            for s in node:
                if not 0 <= s < self.theta:
                    raise ValueError(f"symbol {s} outside [0, {self.theta})")
                counts[s] += 1
        if any(c != self.rho for c in counts):
            raise ValueError(f"every symbol must appear on exactly rho={self.rho} nodes")

    @property
    def masks(self) -> list[int]:
        return [sum(1 << s for s in node) for node in self.nodes]

    def symbol_nodes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.theta)]
        for j, node in enumerate(self.nodes):
            for s in node:
                out[s].append(j)
        return out

    def incidence_matrix(self) -> list[list[int]]:
        rows = [[0] * self.theta for _ in range(self.n)]
        for j, node in enumerate(self.nodes):
            for s in node:
                rows[j][s] = 1
        return rows

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "rho": self.rho,
            "theta": self.theta,
            "nodes": [list(x) for x in self.nodes],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FrCode":
        return cls(
            doc["n"], doc["alpha"], doc["rho"], doc["theta"],
            tuple(tuple(sorted(x)) for x in doc["nodes"]),
        )


def from_set_system(S: SetSystem) -> FrCode:
    rho, alpha = S.require_regular_uniform()
    nodes = tuple(tuple(bl) for bl in S.point_blocks())
    return FrCode(S.num_points, alpha, rho, S.theta, nodes)


def load_code(path) -> FrCode:
    """Read an FrCode document, or build one from a set-system/graph document."""
    with open(path) as fh:
        doc = json.load(fh)
    if "nodes" in doc:
        return FrCode.from_json(doc)
    from .setsystem import Graph

    if "num_vertices" in doc:
        return from_set_system(Graph.from_json(doc).as_set_system())
    return from_set_system(SetSystem.from_json(doc))


# -- file size -------------------------------------------------------------------


@dataclass(frozen=True)
class FileSize:
    k: int
    value: int
    exact: bool
    subsets_checked: int
    witness: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "M": self.value,
            "exact": self.exact,
            "subsets_checked": self.subsets_checked,
            "witness": list(self.witness),
        }


def file_size(
    C: FrCode,
    k: int,
    mode: str = "exact",
    trials: int = 10_000,
    seed: int = 0,
    cap: int | None = None,
) -> FileSize:
    """M(k), exactly by enumeration or as a sampled upper bound.

    ``mode="sampled"`` draws ``trials`` random k-subsets; the minimum it
    finds can only overestimate the true M(k).
    """
    if not 1 <= k <= C.n:
        raise ValueError(f"k must lie in [1, {C.n}]")
    masks = C.masks
    if mode == "exact":
        cap = subset_cap() if cap is None else cap
        total = comb(C.n, k)
        if total > cap:
            raise EnumerationCapError(f"C({C.n},{k}) = {total} subsets exceeds cap {cap}")
        best, witness = C.theta + 1, ()
        # lexicographic order; the witness is the first minimising subset
        for idx in combinations(range(C.n), k):
            u = 0
            for i in idx:
                u |= masks[i]
            size = u.bit_count()
            if size < best:
                best, witness = size, idx
        return FileSize(k, best, True, total, witness)
    if mode == "sampled":
        rng = np.random.Generator(np.random.PCG64(seed))
        best, witness = C.theta + 1, ()
        for _ in range(trials):
            idx = tuple(sorted(int(i) for i in rng.choice(C.n, size=k, replace=False)))
            u = 0
            for i in idx:
                u |= masks[i]
            size = u.bit_count()
            if size < best:
                best, witness = size, idx
        return FileSize(k, best, False, trials, witness)
    raise ValueError(f"unknown mode {mode!r}")


# -- upper bounds on A(n, k, alpha, rho) --------------------------------------------


def bound_singleton(n: int, k: int, alpha: int, rho: int) -> int:
    """floor((n*alpha/rho) * (1 - C(n-rho, k)/C(n, k)))."""
    if not (1 <= k <= n and 1 <= rho <= n):
        raise ValueError("need 1 <= k <= n and 1 <= rho <= n")
    if (n * alpha) % rho:
        raise ValueError("n*alpha must be divisible by rho")
    theta = Fraction(n * alpha, rho)
    value = theta * (1 - Fraction(comb(n - rho, k), comb(n, k)))
    return value.numerator // value.denominator


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def bound_recursive(n: int, k: int, alpha: int, rho: int) -> int:
    """phi(k) with phi(1)=alpha, phi(j+1)=phi(j)+alpha-ceil((rho*phi(j)-j*alpha)/(n-j))."""
    if not 1 <= k < n:
        raise ValueError("bound_recursive needs 1 <= k < n")
    phi = alpha
    for j in range(1, k):
        phi = phi + alpha - _ceil_div(rho * phi - j * alpha, n - j)
    return phi


# -- optimality report ------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    k: int
    M: int
    bound1: int
    bound2: int

    @property
    def certified(self) -> bool:
        return self.M == min(self.bound1, self.bound2)


@dataclass(frozen=True)
class OptimalityReport:
    n: int
    alpha: int
    rho: int
    rows: tuple[ReportRow, ...]

    @property
    def optimal(self) -> bool:
        """Certified for every k <= alpha (needs the report to reach alpha)."""
        covered = {r.k for r in self.rows}
        needed = set(range(1, min(self.alpha, self.n - 1) + 1))
        return needed <= covered and all(r.certified for r in self.rows if r.k in needed)

    def status(self, k: int) -> str:
        row = next(r for r in self.rows if r.k == k)
        return "certified" if row.certified else "undetermined"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "M", "bound1", "bound2", "certified"])
        for r in self.rows:
            w.writerow([r.k, r.M, r.bound1, r.bound2, str(r.certified).lower()])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "rho": self.rho,
            "optimal": self.optimal,
            "rows": [
                {"k": r.k, "M": r.M, "bound1": r.bound1, "bound2": r.bound2,
                 "certified": r.certified, "status": self.status(r.k)}
                for r in self.rows
            ],
        }


def optimality_report(C: FrCode, k_max: int | None = None) -> OptimalityReport:
    """Compare exact M(k) against both bounds for k = 1..k_max.

    A row where M(k) meets the smaller bound certifies k-optimality. A gap
    proves nothing: the bounds need not be attained by any code.
    """
    if k_max is None:
        k_max = min(C.n - 1, C.alpha)
    if not 1 <= k_max < C.n:
        raise ValueError(f"k_max must lie in [1, {C.n - 1}]")
    rows = []
    for k in range(1, k_max + 1):
        m = file_size(C, k).value
        rows.append(ReportRow(
            k, m,
            bound_singleton(C.n, k, C.alpha, C.rho),
            bound_recursive(C.n, k, C.alpha, C.rho),
        ))
    return OptimalityReport(C.n, C.alpha, C.rho, tuple(rows))


def incidence_matches(C: FrCode, S: SetSystem) -> bool:
    return C.incidence_matrix() == incidence_matrix(S)
