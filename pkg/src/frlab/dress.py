"""DRESS storage simulation: outer MDS code over GF(256), inner FR placement.

A file of m bytes is encoded into theta symbols by a systematic Cauchy code.
Symbol i goes to every node whose FR node set contains i. A failed node is
repaired by transfer: alpha helpers each send one stored symbol verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import gf256
from .frcode import FrCode, file_size
from .labeling import check_bijection

RNG_ALGORITHM = "numpy.random.PCG64"


class RepairInfeasible(RuntimeError):
    pass


class InsufficientSymbols(ValueError):
    def __init__(self, available: int, needed: int):
        super().__init__(f"only {available} distinct symbols available, need {needed}")
        self.available = available
        self.needed = needed
        self.deficit = needed - available


def cauchy_generator(theta: int, m: int) -> list[list[int]]:
    """theta x m systematic generator: identity on top, Cauchy rows 1/(x_i + y_j) below."""
    if not 1 <= m <= theta:
        raise ValueError("need 1 <= m <= theta")
    if theta > 255:
        raise ValueError("theta must be at most 255 over GF(256)")
    rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for i in range(theta - m):
        x = m + i
        rows.append([gf256.inv(x ^ y) for y in range(m)])
    return rows


@dataclass(frozen=True)
class DressCode:
    fr: FrCode
    m: int
    generator: tuple[tuple[int, ...], ...]
    k: int | None = None

    @property
    def theta(self) -> int:
        return self.fr.theta


def build(fr: FrCode, m: int, k: int | None = None) -> DressCode:
    """DRESS code storing m symbols; with ``k`` set, checks any k nodes suffice."""
    if k is not None:
        mk = file_size(fr, k).value
        if m > mk:
            raise ValueError(f"m={m} exceeds M({k})={mk}; some {k} nodes could not reconstruct")
    gen = cauchy_generator(fr.theta, m)
    return DressCode(fr, m, tuple(tuple(r) for r in gen), k)


def mds_encode(code: DressCode, data: Sequence[int]) -> list[int]:
    if len(data) != code.m:
        raise ValueError(f"file must have {code.m} symbols, got {len(data)}")
    if any(not 0 <= x < 256 for x in data):
        raise ValueError("symbols are bytes")
    return gf256.matvec(code.generator, data)


def mds_decode(code: DressCode, symbols: Mapping[int, int]) -> list[int]:
    """Recover the file from any m codeword positions (extra positions ignored)."""
    if len(symbols) < code.m:
        raise InsufficientSymbols(len(symbols), code.m)
    idx = sorted(symbols)[: code.m]
    A = [code.generator[i] for i in idx]
    return gf256.solve(A, [symbols[i] for i in idx])


def place(code: DressCode, codeword: Sequence[int]) -> list[dict[int, int]]:
    if len(codeword) != code.theta:
        raise ValueError(f"codeword must have {code.theta} symbols")
    return [{i: codeword[i] for i in node} for node in code.fr.nodes]


def repair_node(
    code: DressCode, contents: Sequence[Mapping[int, int] | None], failed: int
) -> tuple[dict[int, int], list[tuple[int, int]]]:
    """Rebuild node ``failed`` by transfer; returns (contents, [(helper, symbol), ...]).

    Helpers are matched to the lost symbols so that each helper sends one
    symbol. Augmenting paths visit symbols and helpers in index order, which
    fixes the choice when several matchings exist.
    """
    fr = code.fr
    if fr.rho < 2:
        raise RepairInfeasible("replication 1 leaves no surviving copy")
    holders = fr.symbol_nodes()
    lost = sorted(fr.nodes[failed])
    cand = {
        s: [h for h in holders[s] if h != failed and contents[h] is not None] for s in lost
    }
    match_of_helper: dict[int, int] = {}

    def augment(s: int, seen: set[int]) -> bool:
        for h in cand[s]:
            if h in seen:
                continue
            seen.add(h)
            if h not in match_of_helper or augment(match_of_helper[h], seen):
                match_of_helper[h] = s
                return True
        return False

    for s in lost:
        if not augment(s, set()):
            raise RepairInfeasible(f"no distinct helper left for symbol {s} of node {failed}")
    log = sorted(((h, s) for h, s in match_of_helper.items()), key=lambda hs: hs[1])
    recovered = {s: contents[h][s] for h, s in log}
    return recovered, log


def reconstruct(code: DressCode, contents: Mapping[int, Mapping[int, int]]) -> list[int]:
    """Decode the file from the given nodes' contents (node index -> symbols)."""
    pool: dict[int, int] = {}
    for node in contents.values():
        pool.update(node)
    if len(pool) < code.m:
        raise InsufficientSymbols(len(pool), code.m)
    return mds_decode(code, pool)


def roundtrip(code: DressCode, data: Sequence[int], k: int) -> dict:
    """Fail and repair every node, then reconstruct from every k-subset."""
    stored = place(code, mds_encode(code, data))
    transfers = []
    for j in range(code.fr.n):
        damaged = list(stored)
        damaged[j] = None
        rec, log = repair_node(code, damaged, j)
        if rec != stored[j]:
            raise AssertionError(f"repair of node {j} changed its contents")
        transfers.append(len(log))
    ok = fail = 0
    for subset in combinations(range(code.fr.n), k):
        try:
            got = reconstruct(code, {i: stored[i] for i in subset})
        except InsufficientSymbols:
            fail += 1
            continue
        if got != list(data):
            raise AssertionError(f"subset {subset} decoded a different file")
        ok += 1
    return {"transfers": transfers, "subsets_ok": ok, "subsets_short": fail}


# -- byte payloads ---------------------------------------------------------------------------


def encode_payload(code: DressCode, payload: bytes) -> list[list[int]]:
    """Split into m-byte stripes (last one zero padded) and encode each."""
    stripes = []
    for off in range(0, max(len(payload), 1), code.m):
        chunk = list(payload[off:off + code.m])
        chunk += [0] * (code.m - len(chunk))
        stripes.append(mds_encode(code, chunk))
    return stripes


def decode_payload(code: DressCode, stripes_by_node, length: int) -> bytes:
    """``stripes_by_node``: per stripe, a mapping node -> {symbol: byte}."""
    out = bytearray()
    for nodes in stripes_by_node:
        out += bytes(reconstruct(code, nodes))
    return bytes(out[:length])


# -- access workload ----------------------------------------------------------------------


def request_probabilities(sigma: Sequence[int], model: str = "linear", beta: float = 1.0):
    sigma = np.asarray(sigma, dtype=float)
    if model == "linear":
        w = sigma
    elif model == "zipf":
        if beta <= 0:
            raise ValueError("beta must be positive")
        w = 1.0 / sigma**beta
    else:
        raise ValueError(f"unknown popularity model {model!r}")
    return w / w.sum()


def workload_sim(
    fr: FrCode,
    sigma: Sequence[int],
    requests: int,
    model: str = "linear",
    beta: float = 1.0,
    seed: int = 0,
) -> dict:
    """Replay random symbol requests; each request hits every node holding the symbol.

    Symbol draws follow the label (linear model) or 1/label**beta (zipf).
    """
    sigma = [int(x) for x in sigma]
    if len(sigma) != fr.theta:
        raise ValueError("labeling length does not match symbol count")
    check_bijection(sigma)
    probs = request_probabilities(sigma, model, beta)
    rng = np.random.Generator(np.random.PCG64(seed))
    per_symbol = rng.multinomial(requests, probs)
    loads = [int(sum(per_symbol[s] for s in node)) for node in fr.nodes]
    mean = sum(loads) / len(loads)
    return {
        "loads": loads,
        "symbol_requests": [int(x) for x in per_symbol],
        "imbalance": sum((x - mean) ** 2 for x in loads),
        "requests": requests,
        "model": model if model == "linear" else f"zipf:{beta}",
        "seed": seed,
        "rng": RNG_ALGORITHM,
    }
