"""Undirected simple graphs, bounded power-law degree sequences and edge swaps.

Node identifiers are dense integers 0..n-1 throughout the package. All
randomness flows through :class:`Seed`, so every construction is a pure
function of (inputs, seed).
"""
from __future__ import annotations

from dataclasses import dataclass
from collections import deque
from collections.abc import Iterable

import numpy as np

from .errors import DegreeSamplingError

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    """Reproducible RNG root: same (base, replicate) gives the same stream."""

    base: int
    replicate: int = 0

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.base & _MASK64,
                                    spawn_key=(self.replicate,))
        return np.random.default_rng(ss)


class Graph:
    """Mutable undirected simple graph over nodes 0..n-1.

    Self-loops and parallel edges are rejected at the mutation boundary, so
    any reachable instance is simple. Instances are mutated while being
    built and treated as frozen afterwards.

    Graphs built from edge arrays keep them and materialize the per-node
    neighbor sets only when something asks for adjacency; bulk metrics can
    then run straight off the arrays.
    """

    __slots__ = ("n", "_adj", "_m", "_eu", "_ev")

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        self.n = n
        self._adj: list[set[int]] | None = [set() for _ in range(n)]
        self._m = 0
        self._eu: np.ndarray | None = None
        self._ev: np.ndarray | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @classmethod
    def from_arrays(cls, n: int, eu: np.ndarray, ev: np.ndarray) -> "Graph":
        g = cls(n)
        g._adj = None
        g._eu = np.asarray(eu, dtype=np.int64)
        g._ev = np.asarray(ev, dtype=np.int64)
        g._m = len(g._eu)
        return g

    def _materialize(self) -> list[set[int]]:
        if self._adj is None:
            adj: list[set[int]] = [set() for _ in range(self.n)]
            for u, v in zip(self._eu.tolist(), self._ev.tolist()):
                adj[u].add(v)
                adj[v].add(u)
            self._adj = adj
        return self._adj

    @property
    def m(self) -> int:
        return self._m

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._materialize()[u]

    def add_edge(self, u: int, v: int) -> None:
        adj = self._materialize()
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        if v in adj[u]:
            raise ValueError(f"edge ({u},{v}) already present")
        adj[u].add(v)
        adj[v].add(u)
        self._m += 1
        self._eu = self._ev = None  # cached arrays are stale now

    def remove_edge(self, u: int, v: int) -> None:
        adj = self._materialize()
        if v not in adj[u]:
            raise ValueError(f"edge ({u},{v}) not present")
        adj[u].discard(v)
        adj[v].discard(u)
        self._m -= 1
        self._eu = self._ev = None

    def neighbors(self, u: int) -> set[int]:
        """Live neighbor set; callers must not mutate it."""
        return self._materialize()[u]

    def degree(self, u: int) -> int:
        return len(self._materialize()[u])

    def degrees(self) -> np.ndarray:
        if self._adj is None:
            counts = np.bincount(self._eu, minlength=self.n)
            counts += np.bincount(self._ev, minlength=self.n)
            return counts.astype(np.int64)
        return np.array([len(s) for s in self._adj], dtype=np.int64)

    def edges(self):
        """Yield each edge once as (u, v) with u < v."""
        if self._adj is None:
            for u, v in zip(self._eu.tolist(), self._ev.tolist()):
                yield (u, v) if u < v else (v, u)
            return
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._adj is None:
            return self._eu, self._ev
        eu = np.empty(self._m, dtype=np.int64)
        ev = np.empty(self._m, dtype=np.int64)
        i = 0
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if u < v:
                    eu[i] = u
                    ev[i] = v
                    i += 1
        return eu, ev

    def to_csr(self, sort: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form: (indptr, indices), rows sorted if asked."""
        eu, ev = self.edge_arrays()
        src = np.concatenate([eu, ev])
        dst = np.concatenate([ev, eu])
        if sort:
            order = np.lexsort((dst, src))
        else:
            order = np.argsort(src, kind="stable")
        indices = dst[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, indices

    def copy(self) -> "Graph":
        g = Graph(self.n)
        if self._adj is None:
            g._adj = None
            g._eu = self._eu.copy()
            g._ev = self._ev.copy()
        else:
            g._adj = [set(s) for s in self._adj]
        g._m = self._m
        return g

    def is_simple(self) -> bool:
        """Recheck the simplicity invariants from scratch (for tests)."""
        if self._adj is None:
            if len(self._eu) != self._m:
                return False
            if (self._eu == self._ev).any():
                return False
            lo = np.minimum(self._eu, self._ev)
            hi = np.maximum(self._eu, self._ev)
            keys = lo * self.n + hi
            return len(np.unique(keys)) == self._m
        count = 0
        for u, nbrs in enumerate(self._adj):
            if u in nbrs:
                return False
            for v in nbrs:
                if u not in self._adj[v]:
                    return False
            count += len(nbrs)
        return count == 2 * self._m

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


@dataclass(frozen=True)
class PowerLawSpec:
    """Bounded integer power law P(k) proportional to k**(-exponent).

    When `lower` is omitted a `target_mean` must be given; the lower bound
    is then calibrated so the exact distribution mean is as close to the
    target as the integer support allows.
    """

    exponent: float
    upper: int
    lower: int | None = None
    target_mean: float | None = None

    def __post_init__(self):
        if self.exponent <= 1:
            raise ValueError("power-law exponent must exceed 1")
        if self.lower is not None and not (1 <= self.lower <= self.upper):
            raise DegreeSamplingError(
                f"infeasible bounds: lower={self.lower}, upper={self.upper}")
        if self.lower is None and self.target_mean is None:
            raise ValueError("either lower or target_mean is required")


class DegreeSequence:
    """Per-node target degrees, with the bounds they were drawn under."""

    __slots__ = ("degrees", "lower", "upper", "exact_mean")

    def __init__(self, degrees, lower: int | None = None,
                 upper: int | None = None, exact_mean: float | None = None):
        arr = np.asarray(degrees, dtype=np.int64)
        if arr.ndim != 1 or len(arr) == 0:
            raise ValueError("degrees must be a nonempty 1-d sequence")
        if (arr <= 0).any():
            raise ValueError("degrees must be positive")
        self.degrees = arr
        self.lower = int(lower) if lower is not None else int(arr.min())
        self.upper = int(upper) if upper is not None else int(arr.max())
        self.exact_mean = exact_mean

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees.tolist())

    def total(self) -> int:
        return int(self.degrees.sum())

    def mean(self) -> float:
        return float(self.degrees.mean())


def truncated_power_law_pmf(exponent: float, lower: int, upper: int) -> np.ndarray:
    """Exact normalized pmf over the integer support [lower, upper]."""
    k = np.arange(lower, upper + 1, dtype=np.float64)
    w = k ** (-exponent)
    return w / w.sum()

def truncated_power_law_mean(exponent: float, lower: int, upper: int) -> float:
    k = np.arange(lower, upper + 1, dtype=np.float64)
    p = truncated_power_law_pmf(exponent, lower, upper)
    return float((k * p).sum())


def calibrate_lower_bound(exponent: float, upper: int, target_mean: float,
                          tolerance: float = 0.05) -> tuple[int, float]:
    """Pick the integer lower bound whose distribution mean is closest to
    the target; the residual bias is accepted and returned.

    Raises DegreeSamplingError when no lower bound lands within
    `tolerance` (relative) of the target.
    """
    best_lower, best_mean, best_err = 0, 0.0, np.inf
    for lower in range(1, upper + 1):
        mean = truncated_power_law_mean(exponent, lower, upper)
        err = abs(mean - target_mean)
        if err < best_err:
            best_lower, best_mean, best_err = lower, mean, err
    if best_err > tolerance * target_mean:
        raise DegreeSamplingError(
            f"no lower bound in [1,{upper}] reaches mean {target_mean} "
            f"(closest: {best_mean:.4g} at lower={best_lower})")
    return best_lower, best_mean


def default_degree_cutoff(exponent: float, target_mean: float) -> int:
    """Upper degree bound whose calibrated integer lower bound lands the
    distribution mean closest to the target; searched over a band around
    three times the mean (ties prefer the smaller cutoff)."""
    lo = max(2, int(np.ceil(1.5 * target_mean)))
    hi = max(lo + 1, int(np.ceil(3.5 * target_mean)))
    best_u, best_err = lo, np.inf
    for upper in range(lo, hi + 1):
        try:
            _, mean = calibrate_lower_bound(exponent, upper, target_mean,
                                            tolerance=np.inf)
        except DegreeSamplingError:
            continue
        err = abs(mean - target_mean)
        if err < best_err - 1e-12:
            best_u, best_err = upper, err
    return best_u


def sample_power_law_degrees(spec: PowerLawSpec, n: int, seed: Seed) -> DegreeSequence:
    """Draw n degrees from the bounded power law via exact inverse CDF.

    The sum is forced even by incrementing one uniformly chosen node that
    still has headroom below the upper bound; if every node sits at the
    bound the parity cannot be repaired and an error is raised.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if spec.lower is None:
        lower, exact_mean = calibrate_lower_bound(
            spec.exponent, spec.upper, spec.target_mean)
    else:
        lower = spec.lower
        exact_mean = truncated_power_law_mean(spec.exponent, lower, spec.upper)
    rng = seed.rng()
    pmf = truncated_power_law_pmf(spec.exponent, lower, spec.upper)
    cdf = np.cumsum(pmf)
    u = rng.random(n)
    degrees = lower + np.searchsorted(cdf, u, side="right").astype(np.int64)
    np.clip(degrees, lower, spec.upper, out=degrees)
    if degrees.sum() % 2 == 1:
        candidates = np.flatnonzero(degrees < spec.upper)
        if len(candidates) == 0:
            raise DegreeSamplingError(
                "odd degree sum and no node below the upper bound")
        degrees[rng.choice(candidates)] += 1
    return DegreeSequence(degrees, lower, spec.upper, exact_mean)


def double_edge_swap(g: Graph, edge_a: tuple[int, int], edge_b: tuple[int, int],
                     orientation: bool = False) -> bool:
    """Degree-preserving rewiring of two edges.

    Replaces {u,v},{x,y} by {u,x},{v,y} (orientation False) or {u,y},{v,x}
    (True). Returns False and leaves the graph untouched when the four
    endpoints are not distinct or a replacement edge already exists.
    Raises if either input edge is absent.
    """
    u, v = edge_a
    x, y = edge_b
    if not g.has_edge(u, v):
        raise ValueError(f"edge ({u},{v}) not present")
    if not g.has_edge(x, y):
        raise ValueError(f"edge ({x},{y}) not present")
    if orientation:
        x, y = y, x
    # target edges: (u,x) and (v,y)
    if len({u, v, x, y}) != 4:
        return False
    if g.has_edge(u, x) or g.has_edge(v, y):
        return False
    g.remove_edge(u, v)
    g.remove_edge(x, y)
    g.add_edge(u, x)
    g.add_edge(v, y)
    return True


def component_labels(g: Graph) -> np.ndarray:
    """Connected-component id per node, numbered by first appearance."""
    indptr, indices = g.to_csr(sort=False)
    labels = np.full(g.n, -1, dtype=np.int64)
    cur = 0
    for s in range(g.n):
        if labels[s] != -1:
            continue
        labels[s] = cur
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in indices[indptr[u]:indptr[u + 1]].tolist():
                if labels[w] == -1:
                    labels[w] = cur
                    queue.append(w)
        cur += 1
    return labels


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by first node."""
    labels = component_labels(g)
    out: list[list[int]] = [[] for _ in range(labels.max() + 1)] if g.n else []
    for v, lab in enumerate(labels.tolist()):
        out[lab].append(v)
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return bool((component_labels(g) == 0).all())


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest component.

    Returns (subgraph, original_ids) where original_ids[i] is the node of
    `g` that became node i.
    """
    labels = component_labels(g)
    counts = np.bincount(labels)
    keep_label = int(counts.argmax())
    original = np.flatnonzero(labels == keep_label).astype(np.int64)
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[original] = np.arange(len(original), dtype=np.int64)
    eu, ev = g.edge_arrays()
    mask = (labels[eu] == keep_label) & (labels[ev] == keep_label)
    return Graph.from_arrays(len(original), remap[eu[mask]], remap[ev[mask]]), original
