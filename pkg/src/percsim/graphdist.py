"""Chemical distances: BFS hop counts, origin cluster, exact diameter.

Diameters are computed over the origin cluster C(0) (the component holding
the whole backbone); isolated Poisson points would otherwise force the
literal all-pairs diameter to infinity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .edges import EdgeList
from .model import PointCloud


class DisconnectedSubsetError(ValueError):
    """Diameter requested on a vertex subset that is not connected."""


@dataclass
class Graph:
    """Immutable adjacency over a PointCloud (symmetric, no self-loops)."""

    n: int
    csr: sp.csr_matrix
    cloud: PointCloud
    pairs: np.ndarray  # the EdgeList pairs the graph was built from
    backbone_edge_count: int

    @classmethod
    def build(cls, cloud: PointCloud, edges: EdgeList) -> "Graph":
        n = cloud.n
        p = edges.pairs
        rows = np.concatenate([p[:, 0], p[:, 1]])
        cols = np.concatenate([p[:, 1], p[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        csr = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        csr.sort_indices()
        return cls(n=n, csr=csr, cloud=cloud, pairs=p,
                   backbone_edge_count=edges.backbone_edge_count)

    def neighbors(self, v: int) -> np.ndarray:
        return self.csr.indices[self.csr.indptr[v] : self.csr.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.csr.indptr)

    def edge_lengths(self) -> np.ndarray:
        """1-norm length of each edge, aligned with ``pairs``."""
        c = self.cloud.coords
        return np.abs(c[self.pairs[:, 0]] - c[self.pairs[:, 1]]).sum(axis=1)


@dataclass
class DiameterReport:
    diameter: int
    witness_pair: tuple
    cluster_size: int
    origin_corner_distance: int
    bfs_count: int


def bfs_distances(graph: Graph, source) -> np.ndarray:
    """Exact hop counts from source(s); np.inf for unreachable vertices.

    ``source`` may be an int (returns 1-d array) or a list of sources
    (returns one row per source).
    """
    single = np.isscalar(source)
    idx = [source] if single else list(source)
    dist = dijkstra(graph.csr, directed=False, unweighted=True, indices=idx)
    return dist[0] if single else dist


def component_of_origin(graph: Graph) -> np.ndarray:
    """Vertices reachable from vertex 0; contains the whole backbone."""
    return np.flatnonzero(np.isfinite(bfs_distances(graph, 0)))


def origin_corner_distance(graph: Graph) -> int:
    """Hop count from the origin to the far corner (N,...,N); always finite
    because the backbone path joins them."""
    corner = graph.cloud.backbone_count - 1
    return int(bfs_distances(graph, 0)[corner])


def _report(graph, diameter, witness, cluster_size, bfs_count) -> DiameterReport:
    return DiameterReport(
        diameter=int(diameter),
        witness_pair=(int(witness[0]), int(witness[1])),
        cluster_size=int(cluster_size),
        origin_corner_distance=origin_corner_distance(graph),
        bfs_count=int(bfs_count),
    )


def diameter_exact(graph: Graph, subset) -> DiameterReport:
    """All-sources BFS diameter over a connected vertex subset.

    The witness pair is the lexicographically smallest pair attaining the
    diameter.
    """
    subset = np.asarray(subset, dtype=np.int64)
    if len(subset) == 0:
        raise ValueError("subset must be nonempty")
    best = -1
    witness = (int(subset[0]), int(subset[0]))
    chunk = 256
    for lo in range(0, len(subset), chunk):
        src = subset[lo : lo + chunk]
        dist = dijkstra(graph.csr, directed=False, unweighted=True, indices=src)
        dist = dist[:, subset]
        if not np.isfinite(dist).all():
            raise DisconnectedSubsetError("subset is not connected")
        for row, s in zip(dist, src):
            m = int(row.max())
            if m > best:
                best = m
                witness = (int(s), int(subset[int(np.argmax(row == m))]))
            # later sources cannot yield a lexicographically smaller witness
    a, b = witness
    if a > b:
        witness = (b, a)
    return _report(graph, best, witness, len(subset), len(subset))


def _subset_eccentricities(graph: Graph, sources, subset) -> np.ndarray:
    """Eccentricity within ``subset`` of every source vertex, all at once.

    Bit-parallel BFS: each source owns one bit of a per-vertex uint64
    word block, and one frontier expansion per hop ORs every vertex's
    block with its neighbors'. A source's eccentricity is the last hop at
    which any subset vertex gained its bit. Cost is O(diam * E * S/64)
    word operations for S sources, which is cheapest exactly when the
    graph is dense and shallow — the worst case for per-vertex sweeps.
    """
    sources = np.asarray(sources, dtype=np.int64)
    subset = np.asarray(subset, dtype=np.int64)
    indptr = graph.csr.indptr
    indices = graph.csr.indices
    nz = np.diff(indptr) > 0
    red_idx = indptr[:-1][nz]
    ecc = np.zeros(len(sources), dtype=np.int64)
    chunk = 1024  # 16 words per vertex keeps the gather buffers small
    for lo in range(0, len(sources), chunk):
        src = sources[lo : lo + chunk]
        b = len(src)
        words = (b + 63) // 64
        word_of = np.arange(b) // 64
        bit_of = np.uint64(1) << (np.arange(b, dtype=np.uint64) % np.uint64(64))
        state = np.zeros((graph.n, words), dtype=np.uint64)
        np.bitwise_or.at(state, (src, word_of), bit_of)
        level = 0
        while True:
            agg = np.bitwise_or.reduceat(state[indices], red_idx, axis=0)
            new = state.copy()
            new[nz] |= agg
            diff = new ^ state
            if not diff.any():
                break
            level += 1
            gained = np.bitwise_or.reduce(diff[subset], axis=0)
            hit = (gained[word_of] & bit_of) != 0
            ecc[lo : lo + chunk][hit] = level
            state = new
        full = np.bitwise_and.reduce(state[subset], axis=0)
        if np.any((full[word_of] & bit_of) == 0):
            raise DisconnectedSubsetError("subset is not connected")
    return ecc


def diameter_ifub(graph: Graph, subset) -> DiameterReport:
    """Exact diameter via double sweep plus level-descending refutation.

    A double sweep from the subset's first vertex gives a lower bound and a
    long shortest path; eccentricities are then computed level by level,
    descending from the farthest BFS level of the path midpoint, until
    twice the level can no longer beat the bound. Typically needs far
    fewer BFS runs than the all-sources scan, and agrees with it exactly.
    """
    subset = np.asarray(subset, dtype=np.int64)
    if len(subset) == 0:
        raise ValueError("subset must be nonempty")
    in_subset = np.zeros(graph.n, dtype=bool)
    in_subset[subset] = True
    bfs_count = 0

    def sweep(v):
        nonlocal bfs_count
        bfs_count += 1
        return bfs_distances(graph, int(v))

    d0 = sweep(subset[0])
    if not np.isfinite(d0[subset]).all():
        raise DisconnectedSubsetError("subset is not connected")
    ecc0 = int(np.max(d0[subset]))
    x = subset[int(np.argmax(d0[subset]))]
    ub = 2 * ecc0
    lb = ecc0
    witness = (int(subset[0]), int(x))
    if lb >= ub:
        a, b = sorted(witness)
        return _report(graph, lb, (a, b), len(subset), bfs_count)
    dx = sweep(x)
    ecc_x = int(np.max(dx[subset]))
    y = subset[int(np.argmax(dx[subset]))]
    if ecc_x > lb:
        lb = ecc_x
        witness = (int(x), int(y))
    ub = min(ub, 2 * ecc_x)
    if lb >= ub:
        a, b = sorted(witness)
        return _report(graph, lb, (a, b), len(subset), bfs_count)
    dy = sweep(y)

    # midpoint of a shortest x-y path: on-path vertex closest to lb/2 from x
    on_path = in_subset & np.isfinite(dx) & np.isfinite(dy) & (dx + dy == lb)
    path_nodes = np.flatnonzero(on_path)
    mid = path_nodes[int(np.argmin(np.abs(dx[path_nodes] - lb / 2)))]
    dmid = sweep(mid)
    ecc_mid = int(np.max(dmid[subset]))
    if ecc_mid > lb:
        lb = ecc_mid
        witness = (int(mid), int(subset[int(np.argmax(dmid[subset]))]))
    ub = min(ub, 2 * ecc_mid)

    levels = dmid[subset].astype(np.int64)
    level = int(levels.max())
    while 2 * level > lb and lb < ub:
        remaining = subset[(levels <= level) & (2 * levels > lb)]
        if len(remaining) > 96:
            # shallow dense graph: per-vertex sweeps degenerate, so finish
            # all remaining candidates in one bit-parallel pass
            eccs = _subset_eccentricities(graph, remaining, subset)
            bfs_count += len(remaining)
            best = int(eccs.max())
            if best > lb:
                lb = best
                v = remaining[int(np.argmax(eccs))]
                dv = sweep(v)
                witness = (int(v), int(subset[int(np.argmax(dv[subset]))]))
            break
        for v in subset[levels == level]:
            dv = sweep(v)
            ecc = int(np.max(dv[subset]))
            if ecc > lb:
                lb = ecc
                witness = (int(v), int(subset[int(np.argmax(dv[subset]))]))
        level -= 1
    a, b = witness
    if a > b:
        witness = (b, a)
    return _report(graph, lb, witness, len(subset), bfs_count)
