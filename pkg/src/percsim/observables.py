"""Measured graph observables: edge-length histograms, cut/isolated/local
cut intervals (d=1), subcube connection events, renormalization events,
and degree statistics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .edges import sample_edges_grid
from .graphdist import Graph
from .model import ModelParams, assemble_vertex_set
from .rng import mix64, substream


@dataclass
class EdgeLengthHistogram:
    bands: list  # (lower, upper], disjoint, exhaustive over (0, d*N]
    counts: np.ndarray  # all non-path edges per band
    poisson_only_counts: np.ndarray  # only Poisson-Poisson edges


@dataclass
class IntervalReport:
    interval_length: float
    cut_count: int = 0
    isolated_count: int = 0
    local_cut_counts: dict = field(default_factory=dict)


@dataclass
class DegreeStats:
    mean_degree: float  # including backbone path edges
    mean_degree_random: float  # path edges excluded
    max_degree: int
    poisson_mean_degree: float


def dyadic_bands(limit: float, ratio: float = 0.5, floor: float = 1.0) -> list:
    """Bands (ratio*k, k] with k = limit, limit*ratio, ...; the subdivision
    stops at ``floor`` and the lowest band is widened to (0, .], so the
    bands are disjoint and exhaustive over (0, limit]."""
    bands = []
    hi = float(limit)
    while hi > floor * (1 + 1e-12) and hi > 1e-9:
        bands.append((hi * ratio, hi))
        hi *= ratio
    bands.append((0.0, hi))
    return bands[::-1]


def _random_edge_mask(graph: Graph) -> np.ndarray:
    """True for edges that are not backbone path edges."""
    z = graph.cloud.backbone_count
    p = graph.pairs
    return ~((p[:, 1] == p[:, 0] + 1) & (p[:, 1] <= z - 1))


def edge_length_histogram(graph: Graph, bands) -> EdgeLengthHistogram:
    """Count non-path edges by 1-norm endpoint distance into (lo, hi] bands."""
    lengths = graph.edge_lengths()
    rnd = _random_edge_mask(graph)
    z = graph.cloud.backbone_count
    pp = rnd & (graph.pairs[:, 0] >= z)  # Poisson-Poisson only
    counts = np.zeros(len(bands), dtype=np.int64)
    pp_counts = np.zeros(len(bands), dtype=np.int64)
    for k, (lo, hi) in enumerate(bands):
        inside = (lengths > lo) & (lengths <= hi)
        counts[k] = int(np.sum(inside & rnd))
        pp_counts[k] = int(np.sum(inside & pp))
    return EdgeLengthHistogram(bands=list(bands), counts=counts,
                               poisson_only_counts=pp_counts)


def _require_1d(graph: Graph, a: float):
    if graph.cloud.d != 1:
        raise ValueError("interval observables are defined for d=1 only")
    n_int = graph.cloud.coords.max() / a
    if abs(n_int - round(n_int)) > 1e-9:
        raise ValueError(f"interval length {a} does not divide N")
    return int(round(n_int))


def _interval_index(x: np.ndarray, a: float, n_int: int) -> np.ndarray:
    """Half-open membership [j*a, (j+1)*a), final interval closed."""
    return np.minimum(np.floor(x / a).astype(np.int64), n_int - 1)


def count_cut_intervals(graph: Graph, a: float) -> int:
    """d=1: intervals [j*a, (j+1)*a] crossed by no edge of length > 1.

    An edge (u, v), u < v, crosses interval j when u < j*a and v > (j+1)*a.
    """
    n_int = _require_1d(graph, a)
    x = graph.cloud.coords[:, 0]
    rnd = _random_edge_mask(graph)
    lengths = graph.edge_lengths()
    longe = rnd & (lengths > 1.0)
    u = np.minimum(x[graph.pairs[:, 0]], x[graph.pairs[:, 1]])[longe]
    v = np.maximum(x[graph.pairs[:, 0]], x[graph.pairs[:, 1]])[longe]
    # edge kills interval j iff j > u/a and j < v/a - 1
    # interval j is crossed iff j > u/a and j < v/a - 1 (strict)
    lo = np.floor(u / a).astype(np.int64) + 1
    hi = np.ceil(v / a - 1.0).astype(np.int64) - 1
    killed = np.zeros(n_int + 1, dtype=np.int64)
    valid = hi >= lo
    np.add.at(killed, np.clip(lo[valid], 0, n_int), 1)
    np.add.at(killed, np.clip(hi[valid] + 1, 0, n_int), -1)
    crossed = np.cumsum(killed[:-1]) > 0
    return int(n_int - np.sum(crossed))


def count_isolated_intervals(graph: Graph, a: float) -> int:
    """d=1: intervals whose random edges all stay within the interval or
    reach only an adjacent one. Backbone path edges are ignored."""
    n_int = _require_1d(graph, a)
    x = graph.cloud.coords[:, 0]
    rnd = _random_edge_mask(graph)
    i1 = _interval_index(x[graph.pairs[:, 0]], a, n_int)[rnd]
    i2 = _interval_index(x[graph.pairs[:, 1]], a, n_int)[rnd]
    far = np.abs(i1 - i2) >= 2
    not_isolated = np.zeros(n_int, dtype=bool)
    not_isolated[i1[far]] = True
    not_isolated[i2[far]] = True
    return int(n_int - np.sum(not_isolated))


def count_local_cut_intervals(graph: Graph, parent_interval, a: float) -> int:
    """d=1: sub-intervals of the parent crossed by no edge internal to the
    parent. Sub-interval J is cut when no edge (u, v) has
    inf(parent) <= u < inf(J) and sup(J) < v <= sup(parent)."""
    if graph.cloud.d != 1:
        raise ValueError("interval observables are defined for d=1 only")
    lo_p, hi_p = float(parent_interval[0]), float(parent_interval[1])
    width = hi_p - lo_p
    n_sub = width / a
    if abs(n_sub - round(n_sub)) > 1e-9:
        raise ValueError(f"sub-interval length {a} does not divide the parent")
    n_sub = int(round(n_sub))
    x = graph.cloud.coords[:, 0]
    u = np.minimum(x[graph.pairs[:, 0]], x[graph.pairs[:, 1]])
    v = np.maximum(x[graph.pairs[:, 0]], x[graph.pairs[:, 1]])
    rnd = _random_edge_mask(graph)
    internal = rnd & (u >= lo_p) & (v <= hi_p)
    u, v = u[internal], v[internal]
    cut = 0
    for j in range(n_sub):
        jl = lo_p + j * a
        jh = jl + a
        if not np.any((u < jl) & (v > jh)):
            cut += 1
    return cut


def _in_box(coords: np.ndarray, box, extent: float) -> np.ndarray:
    """Half-open box membership, upper face closed on the domain boundary."""
    lo = np.asarray(box[0], dtype=np.float64)
    hi = np.asarray(box[1], dtype=np.float64)
    below = coords < hi
    on_final = (hi >= extent - 1e-12) & (coords == hi)
    return np.all((coords >= lo) & (below | on_final), axis=1)


def subcube_connection_indicator(graph: Graph, box_a, box_b) -> bool:
    """True iff some edge joins a vertex in box_a to a vertex in box_b."""
    extent = float(graph.cloud.coords.max())
    in_a = _in_box(graph.cloud.coords, box_a, extent)
    in_b = _in_box(graph.cloud.coords, box_b, extent)
    p = graph.pairs
    hit = (in_a[p[:, 0]] & in_b[p[:, 1]]) | (in_b[p[:, 0]] & in_a[p[:, 1]])
    return bool(hit.any())


def degree_stats(graph: Graph) -> DegreeStats:
    deg = graph.degrees()
    z = graph.cloud.backbone_count
    rnd = _random_edge_mask(graph)
    deg_rnd = np.bincount(graph.pairs[rnd].ravel(), minlength=graph.n)
    poisson_mean = float(deg_rnd[z:].mean()) if graph.n > z else 0.0
    return DegreeStats(
        mean_degree=float(deg.mean()),
        mean_degree_random=float(deg_rnd.mean()),
        max_degree=int(deg.max()) if graph.n else 0,
        poisson_mean_degree=poisson_mean,
    )


def _level_axis_ids(coords: np.ndarray, N: int, splits: list) -> list:
    """Per-level, per-axis slab indices for every vertex.

    splits[r] is the per-axis subdivision factor applied at level r+1; the
    level-(r+1) axis slab count is the product of the first r+1 factors,
    and all slabs at one level have equal width.
    """
    ids = []
    b_total = 1
    for b in splits:
        b_total *= b
        axis = np.minimum((coords * b_total / N).astype(np.int64), b_total - 1)
        ids.append(axis)  # (n, d) slab index per axis
    return ids


def renorm_event_frequency(
    params: ModelParams, alpha: float, m: int, trials: int, seed: int | None = None
) -> dict:
    """Empirical frequencies of the nested no-edge subcube events.

    Level-r cubes have side about N**(alpha**r); each level-(r-1) cube is
    split per axis into at least two equal parts. The level-r event holds
    when some level-(r-1) cube contains two of its subcubes with no edge
    between them (empty subcubes count). Requires 2*d*alpha > s, alpha < 1.
    """
    if not (alpha < 1 and 2 * params.d * alpha > params.s):
        raise ValueError(
            f"need alpha < 1 and 2*d*alpha > s, got alpha={alpha}, "
            f"d={params.d}, s={params.s}"
        )
    if m < 1:
        raise ValueError("m must be >= 1")
    if seed is None:
        seed = params.seed
    N = params.N
    splits = []
    prev_side = float(N)
    for r in range(1, m + 1):
        side = float(N) ** (alpha**r)
        splits.append(max(2, int(round(prev_side / side))))
        prev_side = prev_side / splits[-1]
    d = params.d

    hits = np.zeros(m, dtype=np.int64)
    union_hits = 0
    for t in range(trials):
        tseed = mix64(seed, "renorm", t)
        cloud = assemble_vertex_set(params, substream(tseed, "points"))
        el = sample_edges_grid(cloud, params, seed=tseed)
        axis_ids = _level_axis_ids(cloud.coords, N, splits)
        any_level = False
        for r in range(m):
            b = splits[r]
            child = axis_ids[r]  # (n, d) per-axis slab index at level r+1
            parent_shape = tuple([int(np.prod(splits[:r]))] * d) if r else (1,) * d
            parent = np.ravel_multi_index(tuple((child // b).T), parent_shape)
            local = np.ravel_multi_index(tuple((child % b).T), tuple([b] * d))
            e_parent = parent[el.pairs]
            e_local = local[el.pairs]
            cross = (e_parent[:, 0] == e_parent[:, 1]) & (e_local[:, 0] != e_local[:, 1])
            p = e_parent[cross, 0]
            lo = np.minimum(e_local[cross, 0], e_local[cross, 1])
            hi = np.maximum(e_local[cross, 0], e_local[cross, 1])
            n_children = b**d
            key = (p * n_children + lo) * n_children + hi
            total_parents = int(np.prod(parent_shape))
            per_parent = np.bincount(
                np.unique(key) // (n_children * n_children),
                minlength=total_parents,
            )
            if np.any(per_parent < n_children * (n_children - 1) // 2):
                hits[r] += 1
                any_level = True
        if any_level:
            union_hits += 1
    return {
        "per_level": (hits / trials).tolist(),
        "union": union_hits / trials,
        "splits": splits,
        "trials": trials,
    }
