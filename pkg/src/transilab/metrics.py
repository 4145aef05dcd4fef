"""Measured quantities: transitivity, clustering, modularity, mixing.

All operations are read-only on frozen graphs. Transitivity follows the
standard closed-to-connected-triple ratio 3 * n_triangles / sum_v C(k_v,2);
the literal set ratio (triangles over 3-node sets carrying at least two
edges) is exposed separately for comparison.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._kernels import tri_stats
from .graph import Graph
from .partition import Partition

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TriadCensus:
    """Exact triangle and connected-triple counts.

    n_connected_triples counts length-2 paths per center node, i.e.
    sum_v C(k_v, 2); every triangle therefore appears three times in it.
    """

    n_triangles: int
    n_connected_triples: int

    def __post_init__(self):
        if self.n_connected_triples < 3 * self.n_triangles:
            raise ValueError("triple count below 3x triangle count")


def triangles_per_node(g: Graph) -> np.ndarray:
    if g.m == 0:
        return np.zeros(g.n, dtype=np.int64)
    indptr, indices = g.to_csr()
    _, tri = tri_stats(indptr, indices)
    return tri


def triad_census(g: Graph) -> TriadCensus:
    degrees = g.degrees()
    triples = int((degrees * (degrees - 1) // 2).sum())
    if g.m == 0:
        return TriadCensus(0, triples)
    indptr, indices = g.to_csr()
    closed, _ = tri_stats(indptr, indices)
    return TriadCensus(int(closed) // 3, triples)


def global_transitivity(g: Graph) -> float:
    """3 * n_triangles / n_connected_triples; 0 when no triple exists."""
    census = triad_census(g)
    if census.n_connected_triples == 0:
        return 0.0
    return 3.0 * census.n_triangles / census.n_connected_triples


def literal_triad_ratio(g: Graph) -> float:
    """Triangles over 3-node sets spanned by at least two edges."""
    census = triad_census(g)
    sets_with_two_edges = census.n_connected_triples - 2 * census.n_triangles
    if sets_with_two_edges == 0:
        return 0.0
    return census.n_triangles / sets_with_two_edges


def transitivity_summary(g: Graph) -> tuple[float, float, float]:
    """(global, average local, literal set ratio) from one census pass."""
    degrees = g.degrees()
    triples = int((degrees * (degrees - 1) // 2).sum())
    if g.m == 0:
        return 0.0, 0.0, 0.0
    indptr, indices = g.to_csr()
    closed, tri = tri_stats(indptr, indices)
    n_tri = int(closed) // 3
    global_c = 3.0 * n_tri / triples if triples else 0.0
    two_plus = triples - 2 * n_tri
    literal = n_tri / two_plus if two_plus else 0.0
    pairs = degrees * (degrees - 1) / 2.0
    mask = degrees >= 2
    values = np.zeros(g.n, dtype=np.float64)
    values[mask] = tri[mask] / pairs[mask]
    avg_local = float(values.mean()) if g.n else 0.0
    return global_c, avg_local, literal


def local_clustering(g: Graph, v: int) -> float:
    """Edge density among v's neighbors; 0 when deg(v) < 2."""
    k = g.degree(v)
    if k < 2:
        return 0.0
    nlist = sorted(g.neighbors(v))
    links = 0
    for i, w in enumerate(nlist):
        wn = g.neighbors(w)
        for z in nlist[i + 1:]:
            if z in wn:
                links += 1
    return 2.0 * links / (k * (k - 1))


def avg_local_clustering(g: Graph, include_low_degree: bool = True) -> float:
    """Unweighted mean of local clustering over nodes.

    Nodes with degree < 2 count as zero by default; with
    include_low_degree=False they are excluded from the mean instead.
    """
    degrees = g.degrees()
    tri = triangles_per_node(g)
    pairs = degrees * (degrees - 1) / 2.0
    mask = degrees >= 2
    values = np.zeros(g.n, dtype=np.float64)
    values[mask] = tri[mask] / pairs[mask]
    if include_low_degree:
        return float(values.mean()) if g.n else 0.0
    if not mask.any():
        return 0.0
    return float(values[mask].mean())


@dataclass(frozen=True)
class CommunityLinkMatrix:
    """Edge fractions between community pairs.

    e[i][j] for i != j is the fraction of edges joining communities i and
    j (stored symmetrically, each cross pair contributing once to the
    upper triangle); e[i][i] is the intra fraction. a[i] is the degree
    fraction d_i / 2m.
    """

    e: np.ndarray
    a: np.ndarray


def community_link_matrix(g: Graph, p: Partition) -> CommunityLinkMatrix:
    if g.m == 0:
        raise ValueError("link matrix undefined for an empty graph")
    c = p.n_communities
    labels = p.assignment
    eu, ev = g.edge_arrays()
    cu, cv = labels[eu], labels[ev]
    e = np.zeros((c, c), dtype=np.float64)
    np.add.at(e, (cu, cv), 1.0)
    cross = cu != cv
    np.add.at(e, (cv[cross], cu[cross]), 1.0)
    e /= g.m
    a = e.diagonal() + 0.5 * (e.sum(axis=1) - e.diagonal())
    return CommunityLinkMatrix(e, a)


def modularity(g: Graph, p: Partition) -> float:
    """Q = sum_c [ l_c/m - (d_c/2m)^2 ]."""
    if g.m == 0:
        raise ValueError("modularity undefined for an empty graph")
    if p.n != g.n:
        raise ValueError("partition does not cover the graph")
    labels = p.assignment
    c = p.n_communities
    eu, ev = g.edge_arrays()
    cu, cv = labels[eu], labels[ev]
    intra = np.bincount(cu[cu == cv], minlength=c)
    deg_tot = np.zeros(c, dtype=np.int64)
    np.add.at(deg_tot, labels, g.degrees())
    m = g.m
    return float((intra / m - (deg_tot / (2.0 * m)) ** 2).sum())


def external_degrees(g: Graph, p: Partition) -> np.ndarray:
    """Per-node count of edges leaving the node's community."""
    labels = p.assignment
    eu, ev = g.edge_arrays()
    cross = labels[eu] != labels[ev]
    ext = np.bincount(eu[cross], minlength=g.n)
    ext += np.bincount(ev[cross], minlength=g.n)
    return ext.astype(np.int64)


def mixing_coefficient(g: Graph, p: Partition) -> float:
    """Mean over nodes of the external fraction of their edges.

    Isolated nodes cannot contribute a fraction and are skipped (logged).
    """
    degrees = g.degrees()
    ext = external_degrees(g, p)
    mask = degrees > 0
    skipped = int(g.n - mask.sum())
    if skipped:
        log.info("mixing_coefficient: skipping %d isolated nodes", skipped)
    if not mask.any():
        return 0.0
    return float((ext[mask] / degrees[mask]).mean())
