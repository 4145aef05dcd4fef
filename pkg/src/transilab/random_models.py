"""Basic generators without designed community structure: CM, BA, EV."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GenerationError, NonGraphicalSequenceError
from .graph import DegreeSequence, Graph, Seed

MAX_RESTARTS = 100
LOCAL_RETRIES = 50


def erdos_gallai_graphical(degrees: np.ndarray) -> bool:
    """Check that a degree sequence admits a simple graph."""
    d = np.sort(np.asarray(degrees, dtype=np.int64))[::-1]
    n = len(d)
    if d.sum() % 2 == 1 or (d < 0).any():
        return False
    if n == 0:
        return True
    if d[0] >= n:
        return False
    prefix = np.cumsum(d)
    for k in range(1, n + 1):
        lhs = prefix[k - 1]
        rhs = k * (k - 1) + int(np.minimum(d[k:], k).sum())
        if lhs > rhs:
            return False
    return True


def configuration_model(deg: DegreeSequence, seed: Seed,
                        max_restarts: int = MAX_RESTARTS) -> Graph:
    """Uniform stub matching constrained to simple graphs.

    Violating pairs are re-drawn locally up to a retry budget, then the
    whole matching restarts with a fresh shuffle; the degree sequence is
    realized exactly.
    """
    degrees = deg.degrees
    if degrees.sum() % 2 == 1:
        raise NonGraphicalSequenceError("degree sum is odd")
    if not erdos_gallai_graphical(degrees):
        raise NonGraphicalSequenceError("sequence fails the Erdos-Gallai test")
    n = len(degrees)
    rng = seed.rng()
    base_stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    for _ in range(max_restarts):
        stubs = base_stubs.copy()
        rng.shuffle(stubs)
        eu, ev, ok = _kernels.stub_match(stubs, n, LOCAL_RETRIES, rng)
        if ok:
            g = Graph.from_arrays(n, eu, ev)
            return g
    raise GenerationError(
        f"stub matching failed after {max_restarts} restarts")


def barabasi_albert(n: int, m: int, seed: Seed) -> Graph:
    """Growth from a complete seed on m+1 nodes, m edges per arrival,
    targets drawn proportional to degree (duplicates redrawn)."""
    if n <= m:
        raise ValueError(f"need n > m, got n={n}, m={m}")
    if m < 1:
        raise ValueError("m must be at least 1")
    eu, ev = _kernels.ba_growth(n, m, seed.rng())
    return Graph.from_arrays(n, eu, ev)


@dataclass(frozen=True)
class EvParams:
    """Payoff-biased growth parameters.

    epsilon blends uniform attachment (0) with payoff-proportional
    attachment (1); temptation is the defector payoff against a
    cooperator in the underlying two-strategy game.
    """

    n: int
    m: int
    epsilon: float = 0.6
    temptation: float = 1.2
    rounds_per_step: int = 1
    coop_fraction: float = 0.5

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.n < self.m + 1:
            raise ValueError("need n >= m + 1")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.temptation <= 1.0:
            raise ValueError("temptation must exceed 1")
        if self.rounds_per_step < 1:
            raise ValueError("rounds_per_step must be at least 1")


def evolutionary_pa(params: EvParams, seed: Seed) -> Graph:
    """BA-style growth where attachment follows accumulated game payoff.

    Between arrivals every node plays `rounds_per_step` rounds against all
    neighbors (cooperator pairs score 1 each, a defector scores
    `temptation` against a cooperator, other pairings score 0); after each
    round a node compares itself with one random neighbor and adopts that
    neighbor's strategy with probability proportional to the payoff gap.
    Arrival t attaches m edges to distinct nodes with probability
    (1-eps)/t + eps * f_i / sum(f).
    """
    rng = seed.rng()
    eu, ev = _kernels.ev_growth(
        params.n, params.m, params.epsilon, params.temptation,
        params.rounds_per_step, params.coop_fraction, rng)
    return Graph.from_arrays(params.n, eu, ev)
