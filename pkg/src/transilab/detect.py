"""Community detection: greedy modularity and map-equation optimizers.

Both run the same multilevel scheme: seeded random-order local moves on a
weighted graph until nothing improves, collapse communities to supernodes
(intra links become self-loops), repeat on the aggregate, and return the
flattened node partition. The map-equation variant minimizes the two-level
random-walk description length instead of maximizing modularity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import metrics
from ._kernels import infomap_local_moves, louvain_local_moves
from .errors import DisconnectedGraphError
from .graph import Graph, Seed, is_connected
from .partition import Partition

EPS_GAIN = 1e-12


@dataclass
class DetectionResult:
    """Detected partition with the objective achieved on the input graph.

    objective is modularity for the greedy-modularity path and description
    length in bits for the map-equation path; passes counts aggregation
    levels. gain_trace lists the per-move objective improvements, in move
    order across levels (always nonnegative).
    """

    partition: Partition
    objective: float
    passes: int
    gain_trace: np.ndarray = field(default_factory=lambda: np.empty(0))


def _graph_csr(g: Graph):
    indptr, indices = g.to_csr(sort=False)
    weights = np.ones(len(indices), dtype=np.float64)
    selfw = np.zeros(g.n, dtype=np.float64)
    return indptr, indices, weights, selfw


def _dense_relabel(labels: np.ndarray) -> np.ndarray:
    seen: dict[int, int] = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels.tolist()):
        if lab not in seen:
            seen[lab] = len(seen)
        out[i] = seen[lab]
    return out


def _aggregate(indptr, indices, weights, selfw, labels, pvis=None):
    c = int(labels.max()) + 1
    new_selfw = np.bincount(labels, weights=selfw, minlength=c)
    src = np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))
    cu = labels[src]
    cw = labels[indices]
    internal = cu == cw
    # internal link weight appears once per direction; halve the total
    new_selfw += np.bincount(cu[internal], weights=weights[internal],
                             minlength=c) / 2.0
    keys = cu[~internal] * c + cw[~internal]
    uniq, inv = np.unique(keys, return_inverse=True)
    wsum = np.bincount(inv, weights=weights[~internal])
    new_indices = (uniq % c).astype(np.int64)
    new_src = (uniq // c).astype(np.int64)
    new_indptr = np.zeros(c + 1, dtype=np.int64)
    np.cumsum(np.bincount(new_src, minlength=c), out=new_indptr[1:])
    new_pvis = None
    if pvis is not None:
        new_pvis = np.bincount(labels, weights=pvis, minlength=c)
    return new_indptr, new_indices, wsum, new_selfw, new_pvis


def louvain(g: Graph, seed: Seed, restarts: int = 1) -> DetectionResult:
    """Two-phase greedy modularity optimization, flat result partition.

    Local moves shuffle node order per pass from the seed; a node moves
    only for a strictly positive modularity gain, ties between target
    communities break toward the lowest id. With restarts > 1 the whole
    procedure reruns under fresh seeds and the best modularity wins.
    """
    if g.m < 1:
        raise ValueError("modularity optimization needs at least one edge")
    if restarts > 1:
        master = seed.rng()
        best: DetectionResult | None = None
        for s in master.integers(0, 2 ** 63 - 1, size=restarts):
            result = louvain(g, Seed(int(s)))
            if best is None or result.objective > best.objective + 1e-15:
                best = result
        return best
    rng = seed.rng()
    indptr, indices, weights, selfw = _graph_csr(g)
    two_m = float(2 * g.m)
    flat = np.arange(g.n, dtype=np.int64)
    traces = []
    levels = 0
    while True:
        n_cur = len(indptr) - 1
        comm = np.arange(n_cur, dtype=np.int64)
        order = rng.permutation(n_cur)
        trace, _mvn, _mvc, moves, _ = louvain_local_moves(
            indptr, indices, weights, selfw, comm, order, two_m, EPS_GAIN)
        if moves == 0:
            break
        traces.append(trace)
        labels = _dense_relabel(comm)
        flat = labels[flat]
        levels += 1
        if int(labels.max()) + 1 == n_cur:
            break
        indptr, indices, weights, selfw, _ = _aggregate(
            indptr, indices, weights, selfw, labels)
    partition = Partition(_dense_relabel(flat))
    objective = metrics.modularity(g, partition)
    gain_trace = (np.concatenate(traces) if traces
                  else np.empty(0, dtype=np.float64))
    return DetectionResult(partition, objective, max(levels, 1), gain_trace)


def _plogp(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def map_equation(g: Graph, p: Partition) -> float:
    """Two-level description length, in bits, of a random walk under p.

    Node visit rates are k/2m, module exit rates cut/2m; terms use the
    convention 0*log(0) = 0. Requires a connected graph.
    """
    if g.m < 1:
        raise ValueError("map equation needs at least one edge")
    if not is_connected(g):
        raise DisconnectedGraphError("map equation requires a connected graph")
    if p.n != g.n:
        raise ValueError("partition does not cover the graph")
    two_m = 2.0 * g.m
    degrees = g.degrees()
    p_alpha = degrees / two_m
    labels = p.assignment
    eu, ev = g.edge_arrays()
    cu, cv = labels[eu], labels[ev]
    cross = cu != cv
    cut = (np.bincount(cu[cross], minlength=p.n_communities)
           + np.bincount(cv[cross], minlength=p.n_communities)).astype(np.float64)
    cut /= two_m
    pmod = np.bincount(labels, weights=p_alpha, minlength=p.n_communities)
    q = float(cut.sum())
    ql = q * np.log2(q) if q > 0 else 0.0
    return float(ql - 2.0 * _plogp(cut).sum() - _plogp(p_alpha).sum()
                 + _plogp(cut + pmod).sum())


def infomap_greedy(g: Graph, seed: Seed, restarts: int = 3) -> DetectionResult:
    """Multilevel map-equation minimization, best of seeded restarts."""
    if g.m < 1:
        raise ValueError("map equation needs at least one edge")
    if not is_connected(g):
        raise DisconnectedGraphError("detection requires a connected graph")
    master = seed.rng()
    restart_seeds = [Seed(int(x)) for x in
                     master.integers(0, 2 ** 63 - 1, size=restarts)]
    best: DetectionResult | None = None
    for rs in restart_seeds:
        result = _infomap_once(g, rs)
        if best is None or result.objective < best.objective - 1e-15:
            best = result
    return best


def _infomap_once(g: Graph, seed: Seed) -> DetectionResult:
    rng = seed.rng()
    indptr, indices, weights, selfw = _graph_csr(g)
    two_m = float(2 * g.m)
    pvis = g.degrees() / two_m
    flat = np.arange(g.n, dtype=np.int64)
    traces = []
    levels = 0
    while True:
        n_cur = len(indptr) - 1
        comm = np.arange(n_cur, dtype=np.int64)
        order = rng.permutation(n_cur)
        trace, moves, _ = infomap_local_moves(
            indptr, indices, weights, selfw, pvis, comm, order, two_m, EPS_GAIN)
        if moves == 0:
            break
        traces.append(trace)
        labels = _dense_relabel(comm)
        flat = labels[flat]
        levels += 1
        if int(labels.max()) + 1 == n_cur:
            break
        indptr, indices, weights, selfw, pvis = _aggregate(
            indptr, indices, weights, selfw, labels, pvis)
    partition = Partition(_dense_relabel(flat))
    objective = map_equation(g, partition)
    gain_trace = (np.concatenate(traces) if traces
                  else np.empty(0, dtype=np.float64))
    return DetectionResult(partition, objective, max(levels, 1), gain_trace)
