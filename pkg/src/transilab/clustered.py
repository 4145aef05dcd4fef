"""Generators with built-in triangles: stub-triple matching and ring closure.

The first splits every node's degree into single-link stubs and triangle
corners controlled by a coefficient in [0, 1]; corners are matched in
random triples, each contributing a full triangle, and no two triangles
share an edge. The second grows from a ring and preferentially connects
nodes at distance two, which stacks triangles much more densely.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GenerationError
from .graph import Graph, PowerLawSpec, Seed, sample_power_law_degrees
from .lfr import round_half_up

log = logging.getLogger(__name__)

MAX_RESTARTS = 100
LOCAL_RETRIES = 50
TRIPLE_RESHUFFLES = 30


@dataclass(frozen=True)
class NmStubSplit:
    """Per-node stub counts: s single links plus t triangle corners."""

    s: int
    t: int

    def __post_init__(self):
        if self.s < 0 or self.t < 0:
            raise ValueError("stub counts must be nonnegative")


@dataclass(frozen=True)
class NmParams:
    n: int
    gamma: float
    mean_degree: float
    k_max: int
    tau: float

    def __post_init__(self):
        if not (0.0 <= self.tau <= 1.0):
            raise ValueError("tau must lie in [0, 1]")


@dataclass(frozen=True)
class HtParams:
    n: int
    gamma: float
    mean_degree: float
    k_max: int
    p_closure: float = 0.9

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("ring construction needs n >= 3")
        if not (0.0 <= self.p_closure <= 1.0):
            raise ValueError("p_closure must lie in [0, 1]")


def nm_stub_split(k: int, tau: float) -> NmStubSplit:
    """Derive the single/triangle split from the total degree.

    t is the rounded half of the triangle share, clamped so 2t never
    exceeds k; s is then forced to k - 2t so the degree is exact.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    t = min(round_half_up(tau * k / 2.0), k // 2)
    return NmStubSplit(s=k - 2 * t, t=t)


def _pad_splits(s: np.ndarray, t: np.ndarray, rng) -> int:
    """Make sum(t) divisible by 3 by demoting corners on random nodes.

    Each demotion turns one triangle corner into two single stubs, which
    keeps every node's degree intact. Returns the number of padded nodes.
    """
    padded = 0
    rem = int(t.sum()) % 3
    for _ in range(rem):
        candidates = np.flatnonzero(t > 0)
        v = int(rng.choice(candidates))
        t[v] -= 1
        s[v] += 2
        padded += 1
    if int(s.sum()) % 2 == 1:
        # unreachable for an even degree sum; guard against misuse
        raise GenerationError("single-stub total came out odd")
    return padded


def nm_generate(params: NmParams, seed: Seed) -> Graph:
    g, _ = nm_generate_with_info(params, seed)
    return g


def nm_generate_with_info(params: NmParams, seed: Seed) -> tuple[Graph, dict]:
    """Sampled degrees, per-node stub split, pairwise and triple matching.

    Every node's realized degree equals its sampled degree; triangles come
    only from matched corner triples (plus whatever closes by chance).
    """
    spec = PowerLawSpec(params.gamma, params.k_max,
                        target_mean=params.mean_degree)
    deg = sample_power_law_degrees(spec, params.n, seed)
    rng = seed.rng()
    n = params.n
    s = np.empty(n, dtype=np.int64)
    t = np.empty(n, dtype=np.int64)
    for v, k in enumerate(deg.degrees):
        split = nm_stub_split(int(k), params.tau)
        s[v], t[v] = split.s, split.t
    padded = _pad_splits(s, t, rng)

    n_single = int(s.sum()) // 2
    n_triples = int(t.sum()) // 3
    total_edges = n_single + 3 * n_triples
    size = 1
    while size < max(4 * total_edges, 16):
        size <<= 1

    base_single = np.repeat(np.arange(n, dtype=np.int64), s)
    base_corner = np.repeat(np.arange(n, dtype=np.int64), t)
    for _ in range(MAX_RESTARTS):
        stubs = base_single.copy()
        rng.shuffle(stubs)
        eu1, ev1, ok = _kernels.stub_match(stubs, n, LOCAL_RETRIES, rng)
        if not ok:
            continue
        for _ in range(TRIPLE_RESHUFFLES):
            table, mask = _kernels.fill_edge_table(eu1, ev1, n, size)
            corners = base_corner.copy()
            rng.shuffle(corners)
            eu3, ev3, ok = _kernels.triple_match(corners, n, table, mask,
                                                 LOCAL_RETRIES, rng)
            if ok:
                g = Graph.from_arrays(n, np.concatenate([eu1, eu3]),
                                      np.concatenate([ev1, ev3]))
                info = {"padded_nodes": padded,
                        "n_single_edges": n_single,
                        "n_triangle_triples": n_triples}
                if padded:
                    log.info("nm_generate: padded %d nodes to balance "
                             "corner triples", padded)
                return g, info
    raise GenerationError(
        f"stub/triple matching failed after {MAX_RESTARTS} restarts")


def ht_generate(params: HtParams, seed: Seed) -> Graph:
    g, _ = ht_generate_with_info(params, seed)
    return g


def ht_generate_with_info(params: HtParams, seed: Seed) -> tuple[Graph, dict]:
    """Ring backbone plus budgeted edges favoring distance-two closures.

    Target degrees are power-law sampled with the lower bound clamped to
    at least 2 so the ring fits every budget. Construction is best effort:
    a node with no remaining valid partner forfeits its leftover stubs,
    reported as `stub_shortfall` in the info dict.
    """
    spec = PowerLawSpec(params.gamma, params.k_max,
                        target_mean=params.mean_degree)
    lower, exact_mean = _calibrated_lower_at_least_two(spec)
    clamped = PowerLawSpec(params.gamma, params.k_max, lower=lower)
    deg = sample_power_law_degrees(clamped, params.n, seed)
    rng = seed.rng()
    n = params.n
    targets = deg.degrees
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(targets, out=indptr[1:])
    adj = np.full(int(indptr[-1]), -1, dtype=np.int64)
    degs = np.zeros(n, dtype=np.int64)
    for v in range(n):
        nxt = (v + 1) % n
        prv = (v - 1) % n
        adj[indptr[v]] = prv
        adj[indptr[v] + 1] = nxt
        degs[v] = 2
    shortfall = int(_kernels.ht_fill(indptr, adj, degs, targets, n,
                                     params.p_closure, rng))
    eu = np.empty(int(degs.sum()) // 2, dtype=np.int64)
    ev = np.empty_like(eu)
    e = 0
    for v in range(n):
        for i in range(indptr[v], indptr[v] + degs[v]):
            w = int(adj[i])
            if v < w:
                eu[e], ev[e] = v, w
                e += 1
    g = Graph.from_arrays(n, eu[:e], ev[:e])
    total_stubs = int(targets.sum())
    info = {"stub_shortfall": shortfall,
            "stub_total": total_stubs,
            "degree_lower": lower,
            "degree_exact_mean": exact_mean}
    if shortfall:
        log.info("ht_generate: %d of %d stubs unplaced", shortfall, total_stubs)
    return g, info


def _calibrated_lower_at_least_two(spec: PowerLawSpec) -> tuple[int, float]:
    from .graph import truncated_power_law_mean
    best_lower, best_mean, best_err = 2, 0.0, np.inf
    for lower in range(2, spec.upper + 1):
        mean = truncated_power_law_mean(spec.exponent, lower, spec.upper)
        err = abs(mean - spec.target_mean)
        if err < best_err:
            best_lower, best_mean, best_err = lower, mean, err
    return best_lower, best_mean
