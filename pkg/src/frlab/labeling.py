"""Access-balance measures for block labelings of a set system.

A block labeling assigns the labels 1..theta bijectively to the blocks
(index-aligned with ``SetSystem.blocks``). A node's popularity is the sum of
the labels of the blocks through it. All variance arithmetic is exact:
the mean popularity ``alpha*(theta+1)/2`` may be a half-integer, so values
are returned as ``fractions.Fraction``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .setsystem import Graph, SetSystem, as_set_system, line_graph


@dataclass(frozen=True)
class BlockLabeling:
    labels: tuple[int, ...]

    def __init__(self, labels: Sequence[int]):
        object.__setattr__(self, "labels", tuple(int(x) for x in labels))
        check_bijection(self.labels)

    def to_json(self) -> dict:
        return {"labels": list(self.labels)}

    @classmethod
    def from_json(cls, doc: dict) -> "BlockLabeling":
        return cls(doc["labels"])


def load_labeling(path) -> list[int]:
    with open(path) as fh:
        return list(BlockLabeling.from_json(json.load(fh)).labels)


def check_bijection(labels: Sequence[int], lo: int = 1) -> None:
    if sorted(labels) != list(range(lo, lo + len(labels))):
        raise ValueError(f"labels must be a permutation of [{lo}, {lo + len(labels) - 1}]")


def _labels(sigma) -> list[int]:
    return list(sigma.labels) if isinstance(sigma, BlockLabeling) else list(sigma)


def popularity(S: SetSystem | Graph, sigma) -> list[int]:
    S = as_set_system(S)
    sigma = _labels(sigma)
    if len(sigma) != S.theta:
        raise ValueError(f"labeling has {len(sigma)} entries, system has {S.theta} blocks")
    check_bijection(sigma)
    p = [0] * S.num_points
    for b, lab in zip(S.blocks, sigma):
        for x in b:
            p[x] += lab
    return p


def mean_popularity(S: SetSystem) -> Fraction:
    alpha = S.alpha
    if alpha is None:
        raise ValueError("access-variance needs a regular set system")
    return Fraction(alpha * (S.theta + 1), 2)


def variance(S: SetSystem | Graph, sigma) -> Fraction:
    """Sum of squared deviations of node popularities from alpha*(theta+1)/2.

    Not divided by n; divide by ``S.num_points`` for the statistical variance.
    """
    S = as_set_system(S)
    abar = mean_popularity(S)
    return sum(((p - abar) ** 2 for p in popularity(S, sigma)), Fraction(0))


def minsum(S: SetSystem | Graph, sigma) -> int:
    return min(popularity(S, sigma))


def maxsum(S: SetSystem | Graph, sigma) -> int:
    return max(popularity(S, sigma))


def variance_constant(theta: int, rho: int, alpha: int) -> Fraction:
    """The labeling-independent term c(theta, rho, alpha) of the quadratic form."""
    return Fraction(rho * theta * (theta + 1) * (2 * theta + 1), 6) - Fraction(
        rho * alpha * theta * (theta + 1) ** 2, 4
    )


def adjacency_form(G: Graph, x: Sequence[int]) -> int:
    """x^T A(G) x, with A symmetric and parallel edges counted by multiplicity."""
    return 2 * sum(w * x[u] * x[v] for (u, v), w in zip(G.edges, G.multiplicity))


def quadratic_variance(S: SetSystem | Graph, sigma) -> Fraction:
    """Access-variance through the line graph: x^T A(L(S)) x + c.

    Holds for non-linear systems too, with the line graph's parallel edges
    weighted by |e & e'|; the derivation only needs every row of I(S)^T I(S)
    to sum to rho*alpha.
    """
    S = as_set_system(S)
    rho, alpha = S.require_regular_uniform()
    x = _labels(sigma)
    check_bijection(x)
    if len(x) != S.theta:
        raise ValueError("labeling length does not match block count")
    return adjacency_form(line_graph(S), x) + variance_constant(S.theta, rho, alpha)


# -- Zipf-weighted popularity ----------------------------------------------------------

ZIPF_TOLERANCE = 1e-9


def zipf_weights(sigma, beta: float) -> list[float]:
    if beta <= 0:
        raise ValueError("beta must be positive")
    return [1.0 / lab**beta for lab in _labels(sigma)]


def zipf_popularity(S: SetSystem | Graph, sigma, beta: float) -> list[float]:
    S = as_set_system(S)
    sigma = _labels(sigma)
    check_bijection(sigma)
    w = zipf_weights(sigma, beta)
    p = [0.0] * S.num_points
    for b, wt in zip(S.blocks, w):
        for x in b:
            p[x] += wt
    return p


def zipf_imbalance(S: SetSystem | Graph, sigma, beta: float) -> float:
    p = zipf_popularity(S, sigma, beta)
    mean = sum(p) / len(p)
    return sum((x - mean) ** 2 for x in p)


def evaluate(S: SetSystem | Graph, sigma, zipf_beta: float | None = None) -> dict:
    """Summary document used by the ``eval`` command."""
    S = as_set_system(S)
    p = popularity(S, sigma)
    out: dict = {"popularity": p, "minsum": min(p), "maxsum": max(p)}
    if S.alpha is not None:
        v = variance(S, sigma)
        out["variance"] = str(v)
        out["variance_float"] = float(v)
    else:
        out["variance"] = None
    if zipf_beta is not None:
        out["zipf_popularity"] = zipf_popularity(S, sigma, zipf_beta)
        out["zipf_imbalance"] = zipf_imbalance(S, sigma, zipf_beta)
    return out
