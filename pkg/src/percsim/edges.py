"""Random edge sampling.

Every unordered vertex pair except consecutive backbone pairs carries an
independent Bernoulli edge with success probability g(r) of the pair's
1-norm distance. Two samplers are provided:

* ``sample_edges_naive`` visits all n(n-1)/2 pairs. Its per-pair coin is
  keyed by (seed, i, j), so the output is a deterministic function of
  (cloud, seed) and couplings across beta are exact. It is the oracle.

* ``sample_edges_grid`` buckets points into cells of side 1 and, for cell
  pairs separated by a positive gap, bounds all pair probabilities by
  p_bar = g(gap). Candidate pairs are enumerated by geometric skipping
  with parameter p_bar over the implicit pair index and thinned with
  probability g(r)/p_bar, so the marginal law of every pair is still
  Bernoulli(g(r)). Same-cell and gap-zero cell pairs go through the
  exhaustive keyed path, hence a single-cell instance reproduces the
  naive sampler bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .model import ModelParams, PointCloud, connection_probability
from .rng import mix64, pair_uniforms, substream


@dataclass(frozen=True)
class EdgeList:
    """Canonically sorted unordered pairs (i < j) into a PointCloud.

    The path edges (k, k+1) along the backbone are always present; their
    number is backbone_edge_count.
    """

    pairs: np.ndarray  # (m, 2) int64, lexicographically sorted, i < j
    backbone_edge_count: int


@dataclass
class SpatialGrid:
    """Cell bucketing of a PointCloud.

    Cell of a point is floor(x / cell_side) per axis, with the final slab
    closed so points on the upper boundary stay in range. ``order`` lists
    point indices cell by cell (flattened C order), ascending within each
    cell; ``starts`` are the CSR offsets.
    """

    cell_side: float
    shape: tuple
    order: np.ndarray
    starts: np.ndarray
    counts: np.ndarray  # dense per-cell counts, shape == self.shape

    @classmethod
    def build(cls, cloud: PointCloud, cell_side: float = 1.0) -> "SpatialGrid":
        d = cloud.d
        extent = float(np.max(cloud.coords)) if cloud.n else 1.0
        ncells = max(1, int(np.ceil(extent / cell_side)))
        per_axis = tuple([ncells] * d)
        cell = np.minimum(
            np.floor(cloud.coords / cell_side).astype(np.int64), ncells - 1
        )
        flat = np.ravel_multi_index(tuple(cell.T), per_axis)
        order = np.argsort(flat, kind="stable")  # ascending index within cell
        counts = np.bincount(flat, minlength=ncells**d)
        starts = np.concatenate([[0], np.cumsum(counts)])
        return cls(
            cell_side=cell_side,
            shape=per_axis,
            order=order,
            starts=starts,
            counts=counts.reshape(per_axis),
        )


def _backbone_pairs(cloud: PointCloud) -> np.ndarray:
    z = cloud.backbone_count
    k = np.arange(z - 1, dtype=np.int64)
    return np.stack([k, k + 1], axis=1)


def _canonical(pairs_list, cloud: PointCloud) -> EdgeList:
    bb = _backbone_pairs(cloud)
    parts = [bb] + [p for p in pairs_list if len(p)]
    pairs = np.vstack(parts)
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    pairs = np.stack([lo, hi], axis=1)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs = pairs[order]
    keep = np.ones(len(pairs), dtype=bool)
    keep[1:] = np.any(pairs[1:] != pairs[:-1], axis=1)
    return EdgeList(pairs=pairs[keep], backbone_edge_count=len(bb))


def _is_consecutive_backbone(i, j, z: int):
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    return (hi == lo + 1) & (hi <= z - 1)


def _keyed_bernoulli(ii, jj, cloud: PointCloud, params: ModelParams, seed):
    """Keep pairs whose keyed uniform falls under g(distance)."""
    excl = _is_consecutive_backbone(ii, jj, cloud.backbone_count)
    ii, jj = ii[~excl], jj[~excl]
    if not len(ii):
        return None
    r = np.abs(cloud.coords[ii] - cloud.coords[jj]).sum(axis=1)
    u = pair_uniforms(seed, ii, jj)
    hit = u < connection_probability(r, params)
    if not hit.any():
        return None
    return np.stack([ii[hit], jj[hit]], axis=1)


def sample_edges_naive(
    cloud: PointCloud, params: ModelParams, seed: int | None = None
) -> EdgeList:
    """Exact reference sampler over all vertex pairs.

    seed defaults to params.seed; the result is a pure function of
    (cloud, params, seed).
    """
    if seed is None:
        seed = params.seed
    n = cloud.n
    kept = []
    block = max(1, int(2e6) // max(n, 1))
    for start in range(0, n, block):
        stop = min(start + block, n)
        ii, jj = np.meshgrid(
            np.arange(start, stop, dtype=np.int64),
            np.arange(n, dtype=np.int64),
            indexing="ij",
        )
        mask = jj > ii
        got = _keyed_bernoulli(ii[mask], jj[mask], cloud, params, seed)
        if got is not None:
            kept.append(got)
    return _canonical(kept, cloud)


def _positive_gap_offsets(shape, cell_side):
    """Lexicographically positive cell offsets split by minimal 1-norm gap
    between closed cells: (offsets with gap > 0, their gaps, gap-0 offsets)."""
    d = len(shape)
    axes = [np.arange(-(n - 1), n) for n in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    offsets = np.stack([m.ravel() for m in mesh], axis=1)
    keep = np.zeros(len(offsets), dtype=bool)
    decided = np.zeros(len(offsets), dtype=bool)
    for k in range(d):
        col = offsets[:, k]
        keep |= (~decided) & (col > 0)
        decided |= col != 0
    offsets = offsets[keep]
    gap = cell_side * np.maximum(np.abs(offsets) - 1, 0).sum(axis=1)
    pos = gap > 0
    return offsets[pos], gap[pos], offsets[~pos]


def _cell_rows(grid: SpatialGrid, flats: np.ndarray, width: int) -> np.ndarray:
    """Member point indices of equal-count cells as a (len(flats), width)
    matrix, ascending within each row."""
    return grid.order[grid.starts[flats][:, None] + np.arange(width)[None, :]]


def _exhaustive_pairs(grid, occ_flat, occ_coord, zero_offsets, shape_arr):
    """All unordered point pairs within a cell or across a gap-0 cell pair."""
    counts_flat = grid.counts.ravel()
    occ_counts = counts_flat[occ_flat]
    out_i, out_j = [], []
    # same cell
    for v in np.unique(occ_counts):
        if v < 2:
            continue
        rows = _cell_rows(grid, occ_flat[occ_counts == v], int(v))
        iu, ju = np.triu_indices(int(v), k=1)
        out_i.append(rows[:, iu].ravel())
        out_j.append(rows[:, ju].ravel())
    # gap-0 neighbor cells
    for off in zero_offsets:
        nb_coord = occ_coord + off
        ok = np.all((nb_coord >= 0) & (nb_coord < shape_arr), axis=1)
        c1 = occ_flat[ok]
        c2 = np.ravel_multi_index(tuple(nb_coord[ok].T), tuple(shape_arr))
        n1 = counts_flat[c1]
        n2 = counts_flat[c2]
        both = (n1 > 0) & (n2 > 0)
        c1, c2, n1, n2 = c1[both], c2[both], n1[both], n2[both]
        combos = np.unique(np.stack([n1, n2], axis=1), axis=0)
        for v1, v2 in combos:
            sel = (n1 == v1) & (n2 == v2)
            rows1 = _cell_rows(grid, c1[sel], int(v1))
            rows2 = _cell_rows(grid, c2[sel], int(v2))
            k = rows1.shape[0]
            out_i.append(
                np.broadcast_to(rows1[:, :, None], (k, int(v1), int(v2))).ravel()
            )
            out_j.append(
                np.broadcast_to(rows2[:, None, :], (k, int(v1), int(v2))).ravel()
            )
    if not out_i:
        return None, None
    return np.concatenate(out_i), np.concatenate(out_j)


def _geometric_skip(rng: np.random.Generator, total: int, p: float,
                    first_gap: int) -> np.ndarray:
    """Indices in [0, total) of Bernoulli(p) successes, by skip sampling.

    first_gap is the pre-drawn gap to the first success (1-based); gaps for
    the remaining successes are drawn in batches.
    """
    if first_gap > total:
        return np.empty(0, dtype=np.int64)
    hits = [np.array([first_gap - 1], dtype=np.int64)]
    pos = first_gap - 1
    while True:
        remaining = total - pos - 1
        if remaining <= 0:
            break
        mu = remaining * p
        batch = int(mu + 5.0 * np.sqrt(mu) + 10.0)
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        inside = idx < total
        if inside.all():
            hits.append(idx)
            pos = int(idx[-1])
        else:
            hits.append(idx[inside])
            break
    return np.concatenate(hits)


def sample_edges_grid(
    cloud: PointCloud,
    params: ModelParams,
    seed: int | None = None,
    cell_side: float = 1.0,
) -> EdgeList:
    """Grid-bucketed sampler; marginal edge law identical to the naive one."""
    if seed is None:
        seed = params.seed
    z = cloud.backbone_count
    coords = cloud.coords
    grid = SpatialGrid.build(cloud, cell_side)
    shape_arr = np.array(grid.shape)
    kept = []

    pos_offsets, gaps, zero_offsets = _positive_gap_offsets(grid.shape, cell_side)
    counts_flat = grid.counts.ravel()
    occ_flat = np.flatnonzero(counts_flat)
    occ_coord = np.stack(np.unravel_index(occ_flat, grid.shape), axis=1)

    ii, jj = _exhaustive_pairs(grid, occ_flat, occ_coord, zero_offsets, shape_arr)
    if ii is not None:
        got = _keyed_bernoulli(ii, jj, cloud, params, seed)
        if got is not None:
            kept.append(got)

    if params.beta > 0 and len(pos_offsets):
        rng = substream(seed, "grid-edges")
        counts = grid.counts.astype(np.float64)
        rev = tuple([slice(None, None, -1)] * len(grid.shape))
        corr = np.rint(fftconvolve(counts, counts[rev]))
        center = shape_arr - 1
        m_tot = corr[tuple((center[:, None] + pos_offsets.T).tolist())]
        p_bar = connection_probability(gaps, params)
        live = (m_tot > 0.5) & (p_bar > 0)
        first = np.zeros(len(pos_offsets), dtype=np.int64)
        first[live] = rng.geometric(p_bar[live])
        fire = live & (first <= m_tot)
        for k in np.flatnonzero(fire):
            off = pos_offsets[k]
            pb = float(p_bar[k])
            nb_coord = occ_coord + off
            ok = np.all((nb_coord >= 0) & (nb_coord < shape_arr), axis=1)
            c1 = occ_flat[ok]
            c2 = np.ravel_multi_index(tuple(nb_coord[ok].T), grid.shape)
            n2 = counts_flat[c2]
            both = n2 > 0
            c1, c2, n2 = c1[both], c2[both], n2[both]
            n1 = counts_flat[c1]
            sizes = n1 * n2
            cum = np.cumsum(sizes)
            total = int(cum[-1])
            cand = _geometric_skip(rng, total, pb, int(first[k]))
            if not len(cand):
                continue
            blk = np.searchsorted(cum, cand, side="right")
            within = cand - (cum[blk] - sizes[blk])
            li = within // n2[blk]
            lj = within % n2[blk]
            ci = grid.order[grid.starts[c1[blk]] + li]
            cj = grid.order[grid.starts[c2[blk]] + lj]
            excl = _is_consecutive_backbone(ci, cj, z)
            ci, cj = ci[~excl], cj[~excl]
            if not len(ci):
                continue
            r = np.abs(coords[ci] - coords[cj]).sum(axis=1)
            accept = rng.random(len(ci)) < connection_probability(r, params) / pb
            if accept.any():
                kept.append(np.stack([ci[accept], cj[accept]], axis=1))

    return _canonical(kept, cloud)


def expected_edge_count(
    params: ModelParams,
    band: tuple | None = None,
    n_samples: int = 10**6,
    seed: int | None = None,
):
    """Monte Carlo estimate of the expected Poisson-Poisson edge count.

    Estimates (rho^2 / 2) * iint over the box of g(|x - y|_1), optionally
    restricted to 1-norm lengths in (band[0], band[1]]. Returns
    (estimate, standard_error).
    """
    if seed is None:
        seed = mix64(params.seed, "expected-edge-count")
    if params.beta == 0:
        return 0.0, 0.0
    rng = substream(seed)
    x = rng.uniform(0.0, params.N, size=(n_samples, params.d))
    y = rng.uniform(0.0, params.N, size=(n_samples, params.d))
    r = np.abs(x - y).sum(axis=1)
    vals = connection_probability(r, params)
    if band is not None:
        lo, hi = band
        vals = vals * ((r > lo) & (r <= hi))
    scale = 0.5 * params.rho**2 * float(params.N) ** (2 * params.d)
    est = scale * float(vals.mean())
    se = scale * float(vals.std(ddof=1)) / np.sqrt(n_samples)
    return est, se
