"""Benchmark graphs with planted communities and a controlled mixing level.

Pipeline: seed network from a basic model, draw power-law community
sizes, assign nodes to communities subject to their internal-degree
needs, then rewire with degree-preserving swaps until the mean external
link fraction reaches the target.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import metrics
from ._kernels import apply_swap_pairs
from .errors import AssignmentError
from .graph import DegreeSequence, Graph, PowerLawSpec, Seed, sample_power_law_degrees
from .partition import Partition
from .random_models import EvParams, barabasi_albert, configuration_model, evolutionary_pa

log = logging.getLogger(__name__)

BASIC_MODELS = ("cm", "ba", "ev")


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class LfrParams:
    n: int
    gamma: float
    beta: float
    mean_degree: float
    k_max: int
    n_max: int
    mu: float
    n_min: int = 10
    basic_model: str = "cm"
    mu_tolerance: float = 0.02
    max_sweeps: int = 500

    def __post_init__(self):
        if not (self.n_min <= self.n_max <= self.n):
            raise ValueError("need n_min <= n_max <= n")
        if not (0.0 <= self.mu <= 1.0):
            raise ValueError("mu must lie in [0, 1]")
        if self.basic_model not in BASIC_MODELS:
            raise ValueError(f"unknown basic model {self.basic_model!r}")


def sample_community_sizes(n: int, beta: float, n_min: int, n_max: int,
                           seed: Seed) -> np.ndarray:
    """Community sizes with P(s) proportional to s**(-beta), summing to n.

    Sizes are drawn until the running total reaches n; the last draw is
    shrunk to close the total exactly, and merged into the smallest other
    community when it falls below n_min.
    """
    if n < n_min:
        raise ValueError(f"cannot place {n} nodes with n_min={n_min}")
    if not (2 <= n_min <= n_max <= n):
        raise ValueError("need 2 <= n_min <= n_max <= n")
    rng = seed.rng()
    support = np.arange(n_min, n_max + 1, dtype=np.float64)
    w = support ** (-beta)
    cdf = np.cumsum(w / w.sum())
    sizes: list[int] = []
    total = 0
    while total < n:
        s = n_min + int(np.searchsorted(cdf, rng.random(), side="right"))
        s = min(s, n_max)
        sizes.append(s)
        total += s
    excess = total - n
    if excess > 0:
        sizes[-1] -= excess
        if sizes[-1] < n_min:
            leftover = sizes.pop()
            idx = int(np.argmin(sizes))
            sizes[idx] += leftover
            # rebalance if the merge pushed a community past n_max
            while sizes[idx] > n_max:
                give = int(np.argmin(sizes))
                room = n_max - sizes[give]
                if room <= 0:
                    break
                move = min(room, sizes[idx] - n_max)
                sizes[give] += move
                sizes[idx] -= move
    out = np.array(sizes, dtype=np.int64)
    assert out.sum() == n
    return out


def _internal_targets(degrees: np.ndarray, mu: float) -> np.ndarray:
    return np.array([round_half_up((1.0 - mu) * int(k)) for k in degrees],
                    dtype=np.int64)


class _Fenwick:
    """Prefix-sum tree over integer weights, for weighted sampling."""

    __slots__ = ("tree", "size")

    def __init__(self, weights):
        self.size = len(weights)
        self.tree = [0] * (self.size + 1)
        for i, w in enumerate(weights):
            self.add(i, int(w))

    def add(self, i, delta):
        i += 1
        while i <= self.size:
            self.tree[i] += delta
            i += i & (-i)

    def prefix(self, i):
        s = 0
        i += 1
        while i > 0:
            s += self.tree[i]
            i -= i & (-i)
        return s

    def search(self, target):
        """Smallest index whose cumulative weight exceeds target."""
        pos = 0
        step = 1
        while step * 2 <= self.size:
            step *= 2
        rem = target
        while step > 0:
            nxt = pos + step
            if nxt <= self.size and self.tree[nxt] <= rem:
                pos = nxt
                rem -= self.tree[nxt]
            step >>= 1
        return pos


def assign_communities(deg: DegreeSequence, sizes, mu: float, seed: Seed,
                       strict: bool = True) -> Partition:
    """Place nodes into fixed-size communities respecting internal degree.

    A node with degree k needs round((1-mu)*k) internal links, so it only
    fits a community of size at least that plus one. Nodes are processed
    from the most constrained down; each takes a seat in the smallest
    still-open community that fits it, which keeps communities as dense
    as their members' internal degrees demand. Capacities are respected
    exactly. With strict=True an unplaceable node raises; otherwise it is
    clamped into the largest community with room (counted and logged).
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    degrees = deg.degrees
    if sizes.sum() != len(degrees):
        raise ValueError("community sizes must sum to the node count")
    rng = seed.rng()
    need = _internal_targets(degrees, mu) + 1  # minimum community size
    order = rng.permutation(len(degrees))
    order = order[np.argsort(-need[order], kind="stable")]
    by_size = np.argsort(-sizes, kind="stable")  # community ids, big first
    sorted_sizes = sizes[by_size]
    has_room = _Fenwick(np.ones(len(sizes), dtype=np.int64))
    room = sorted_sizes.copy()
    assignment = np.empty(len(degrees), dtype=np.int64)
    violations = 0
    for v in order:
        # eligible communities form a prefix of the size-sorted order
        hi = int(np.searchsorted(-sorted_sizes, -need[v], side="right"))
        slot = -1
        if hi > 0:
            open_count = has_room.prefix(hi - 1)
            if open_count > 0:
                slot = has_room.search(open_count - 1)  # smallest that fits
        if slot < 0:
            if strict:
                raise AssignmentError(
                    f"node {v} with degree {degrees[v]} needs a community of "
                    f"size >= {need[v]}, none available")
            slot = has_room.search(0)  # largest open community
            violations += 1
        room[slot] -= 1
        if room[slot] == 0:
            has_room.add(slot, -1)
        assignment[v] = by_size[slot]
    if violations:
        log.warning("assign_communities: %d nodes exceed their community "
                    "size, internal degree will saturate", violations)
    return Partition(assignment)


def _proposal_batch(rng, eu, ev, comm, ext, text, m):
    """Candidate swap pairs for one sweep: deficit-aligned plus random."""
    cu = comm[eu]
    cv = comm[ev]
    cross = cu != cv
    surplus = ext > text
    deficit = ext < text

    blocks = []
    # internalize: pair surplus endpoints of external edges inside one community
    sel_a = np.flatnonzero(cross & surplus[eu])
    sel_b = np.flatnonzero(cross & surplus[ev])
    edges_i = np.concatenate([sel_a, sel_b])
    nodes_i = np.concatenate([eu[sel_a], ev[sel_b]])
    if len(edges_i) >= 2:
        keys = comm[nodes_i]
        order = np.lexsort((rng.permutation(len(keys)), keys))
        edges_i = edges_i[order]
        nodes_i = nodes_i[order]
        lim = len(edges_i) - (len(edges_i) % 2)
        same = keys[order][0:lim:2] == keys[order][1:lim:2]
        blocks.append((edges_i[0:lim:2][same], nodes_i[0:lim:2][same],
                       edges_i[1:lim:2][same], nodes_i[1:lim:2][same]))
    # externalize: pair over-internal endpoints of internal edges across communities
    sel_a = np.flatnonzero(~cross & deficit[eu])
    sel_b = np.flatnonzero(~cross & deficit[ev])
    edges_x = np.concatenate([sel_a, sel_b])
    nodes_x = np.concatenate([eu[sel_a], ev[sel_b]])
    if len(edges_x) >= 2:
        order = rng.permutation(len(edges_x))
        edges_x = edges_x[order]
        nodes_x = nodes_x[order]
        lim = len(edges_x) - (len(edges_x) % 2)
        blocks.append((edges_x[0:lim:2], nodes_x[0:lim:2],
                       edges_x[1:lim:2], nodes_x[1:lim:2]))
    # uniform random proposals keep the chain mixing near plateaus
    r = max(m // 10, 8)
    ia = rng.integers(0, m, r)
    ib = rng.integers(0, m, r)
    side_a = rng.random(r) < 0.5
    side_b = rng.random(r) < 0.5
    blocks.append((ia, np.where(side_a, eu[ia], ev[ia]),
                   ib, np.where(side_b, eu[ib], ev[ib])))

    a_edge = np.concatenate([b[0] for b in blocks])
    a_node = np.concatenate([b[1] for b in blocks])
    b_edge = np.concatenate([b[2] for b in blocks])
    b_node = np.concatenate([b[3] for b in blocks])
    if len(a_edge) > m:  # a sweep proposes at most m swaps
        a_edge, a_node = a_edge[:m], a_node[:m]
        b_edge, b_node = b_edge[:m], b_node[:m]
    return a_edge, a_node, b_edge, b_node


SIDEWAYS_RATE = 0.01
STALL_SWEEPS = 5


def rewire_to_mixing(g: Graph, p: Partition, mu: float, tol: float = 0.02,
                     max_sweeps: int = 500, seed: Seed | None = None
                     ) -> tuple[Graph, float]:
    """Drive the mean external-link fraction to mu with double edge swaps.

    Only swaps that strictly reduce the per-node L1 deficit against the
    internal-degree targets are applied, except that proposals leaving the
    deficit unchanged are accepted at a 1% rate to escape plateaus. Every
    node keeps its degree. Stops once the measured mean external fraction
    is within tol of mu, after max_sweeps sweeps, or when several sweeps
    in a row make no progress; the achieved value is always returned.
    """
    if seed is None:
        seed = Seed(0)
    rng = seed.rng()
    n = g.n
    m = g.m
    if m == 0:
        return g.copy(), 0.0
    eu, ev = g.edge_arrays()
    eu, ev = eu.copy(), ev.copy()
    comm = p.assignment.copy()
    degrees = g.degrees()
    # internal targets cannot exceed the community size minus one; capping
    # keeps the objective attainable for nodes clamped into small rooms
    internal = np.minimum(_internal_targets(degrees, mu),
                          p.sizes[comm] - 1)
    text = degrees - internal
    indptr, adj = g.to_csr(sort=False)
    adj = adj.copy()
    cross = comm[eu] != comm[ev]
    ext = np.zeros(n, dtype=np.int64)
    np.add.at(ext, eu[cross], 1)
    np.add.at(ext, ev[cross], 1)

    nz = degrees > 0
    achieved = float((ext[nz] / degrees[nz]).mean())
    sweeps = 0
    stalled = 0
    stall_floor = max(1, m // 2000)
    while abs(achieved - mu) > tol and sweeps < max_sweeps:
        a_edge, a_node, b_edge, b_node = _proposal_batch(
            rng, eu, ev, comm, ext, text, m)
        if len(a_edge) == 0:
            break
        coins = rng.random(len(a_edge))
        accepted, _ = apply_swap_pairs(indptr, adj, eu, ev, comm, ext, text,
                                       a_edge, a_node, b_edge, b_node,
                                       coins, SIDEWAYS_RATE)
        sweeps += 1
        stalled = stalled + 1 if accepted < stall_floor else 0
        if stalled >= STALL_SWEEPS:
            break
        achieved = float((ext[nz] / degrees[nz]).mean())
    result = Graph.from_arrays(n, eu, ev)
    achieved_mu = metrics.mixing_coefficient(result, p)
    if abs(achieved_mu - mu) > tol:
        log.warning("rewire_to_mixing: residual %.4f after %d sweeps "
                    "(target %.3f, achieved %.4f)",
                    abs(achieved_mu - mu), sweeps, mu, achieved_mu)
    return result, achieved_mu


def _seed_network(params: LfrParams, seed: Seed) -> Graph:
    if params.basic_model == "cm":
        spec = PowerLawSpec(params.gamma, params.k_max,
                            target_mean=params.mean_degree)
        deg = sample_power_law_degrees(spec, params.n, seed)
        return configuration_model(deg, seed)
    links = max(1, round_half_up(params.mean_degree / 2.0))
    if params.basic_model == "ba":
        return barabasi_albert(params.n, links, seed)
    return evolutionary_pa(EvParams(params.n, links), seed)


def lfr_generate(params: LfrParams, seed: Seed) -> tuple[Graph, Partition, float]:
    """Seed network, planted sizes, degree-aware assignment, rewiring.

    Node degrees in the output match the seed network exactly. Nodes whose
    internal-degree need exceeds every community are clamped into the
    largest community with room (their external fraction then exceeds mu;
    the rewiring objective simply saturates for them).
    """
    rng = seed.rng()
    children = [Seed(int(x)) for x in
                rng.integers(0, 2 ** 63 - 1, size=4, dtype=np.int64)]
    g0 = _seed_network(params, children[0])
    sizes = sample_community_sizes(params.n, params.beta, params.n_min,
                                   params.n_max, children[1])
    deg = DegreeSequence(g0.degrees())  # seed models leave no isolated nodes
    partition = assign_communities(deg, sizes, params.mu, children[2],
                                   strict=False)
    rewired, achieved_mu = rewire_to_mixing(
        g0, partition, params.mu, params.mu_tolerance, params.max_sweeps,
        children[3])
    return rewired, partition, achieved_mu
