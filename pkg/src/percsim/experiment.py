"""Monte Carlo sweep driver, regime classification, and exponent fits."""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .edges import sample_edges_grid, sample_edges_naive
from .graphdist import Graph, component_of_origin, diameter_ifub
from .model import ModelParams, OutOfScopeError
from .observables import degree_stats
from .rng import mix64, substream

log = logging.getLogger("percsim")

CSV_HEADER = (
    "d,N,s,beta,rho,seed,trial,n_vertices,n_edges,cluster_size,"
    "diameter,origin_corner_distance,isolated_vertices,wall_time_s"
)

REGIME_TOL = 1e-9
DEFAULT_VERTEX_CAP = 200_000


@dataclass
class SweepConfig:
    d: int
    s: float
    beta: float
    rho: float
    seed: int
    N_grid: list
    trials_per_N: int
    output_path: str = "sweep.csv"
    observables_enabled: bool = False
    sampler: str = "grid"
    vertex_cap: int = DEFAULT_VERTEX_CAP

    def __post_init__(self):
        if not self.N_grid:
            raise ValueError("N_grid must be nonempty")
        if list(self.N_grid) != sorted(set(self.N_grid)):
            raise ValueError("N_grid must be strictly increasing")
        if self.trials_per_N < 1:
            raise ValueError("trials_per_N must be >= 1")
        if self.d >= 2 and any(n % 2 for n in self.N_grid):
            raise ValueError("all N must be even when d >= 2")


@dataclass
class TrialRecord:
    params: ModelParams
    trial_index: int
    n_vertices: int
    n_edges: int
    cluster_size: int
    diameter: int
    origin_corner_distance: int
    isolated_vertex_count: int
    wall_time: float
    observables: dict = field(default_factory=dict)

    def csv_row(self) -> str:
        p = self.params
        return (
            f"{p.d},{p.N},{p.s:g},{p.beta:g},{p.rho:g},{p.seed},"
            f"{self.trial_index},{self.n_vertices},{self.n_edges},"
            f"{self.cluster_size},{self.diameter},"
            f"{self.origin_corner_distance},{self.isolated_vertex_count},"
            f"{self.wall_time:.3f}"
        )


def trial_seed(seed: int, N: int, trial_index: int) -> int:
    """Per-trial stream key; sweeps stay extendable without recomputation."""
    return mix64(seed, N, trial_index)


def run_trial(
    params: ModelParams,
    trial_index: int,
    sampler: str = "grid",
    observables: bool = False,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> TrialRecord | None:
    """One full simulation: vertices, edges, origin cluster, diameter.

    Deterministic given (params, trial_index). Returns None (with a log
    entry) when the vertex count exceeds vertex_cap.
    """
    from .model import assemble_vertex_set  # local to keep workers picklable

    t0 = time.perf_counter()
    tseed = trial_seed(params.seed, params.N, trial_index)
    cloud = assemble_vertex_set(params, substream(tseed, "points"))
    if cloud.n > vertex_cap:
        log.warning(
            "skipping trial %d (N=%d): %d vertices exceeds cap %d",
            trial_index, params.N, cloud.n, vertex_cap,
        )
        return None
    sample = sample_edges_naive if sampler == "naive" else sample_edges_grid
    el = sample(cloud, params, seed=tseed)
    graph = Graph.build(cloud, el)
    cluster = component_of_origin(graph)
    rep = diameter_ifub(graph, cluster)
    rec = TrialRecord(
        params=params,
        trial_index=trial_index,
        n_vertices=cloud.n,
        n_edges=len(el.pairs),
        cluster_size=len(cluster),
        diameter=rep.diameter,
        origin_corner_distance=rep.origin_corner_distance,
        isolated_vertex_count=cloud.n - len(cluster),
        wall_time=time.perf_counter() - t0,
    )
    if observables:
        ds = degree_stats(graph)
        rec.observables = {
            "mean_degree": ds.mean_degree,
            "mean_degree_random": ds.mean_degree_random,
            "max_degree": ds.max_degree,
            "poisson_mean_degree": ds.poisson_mean_degree,
        }
    return rec


@dataclass
class FitResult:
    exponent: float
    stderr: float
    r_squared: float
    n_points: int
    intercept: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def _ols(x: np.ndarray, y: np.ndarray) -> FitResult:
    n = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise ValueError("need at least 2 distinct x values")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - slope * x - intercept
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    stderr = (
        float(np.sqrt(ss_res / (n - 2) / sxx)) if n > 2 else 0.0
    )
    return FitResult(exponent=slope, stderr=stderr, r_squared=r2,
                     n_points=n, intercept=intercept)


def _check_points(points):
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (N, D) pairs")
    if len(np.unique(pts[:, 0])) < 3:
        raise ValueError("need at least 3 distinct N values")
    if np.any(pts <= 0):
        raise ValueError("N and D must be positive")
    return pts


def fit_power_law(points) -> FitResult:
    """Least-squares slope of log D against log N."""
    pts = _check_points(points)
    return _ols(np.log(pts[:, 0]), np.log(pts[:, 1]))


def fit_polylog(points) -> FitResult:
    """Least-squares slope of log D against log log N."""
    pts = _check_points(points)
    if np.any(pts[:, 0] <= 1):
        raise ValueError("need N > 1 for log log N")
    return _ols(np.log(np.log(pts[:, 0])), np.log(pts[:, 1]))


def fit_logratio(points) -> FitResult:
    """Zero-intercept least squares of D against log N / log log N.

    r_squared reports max/min of D * log log N / log N over the grid (the
    sandwich-ratio diagnostic) via the returned dict from summarize; here
    it is the usual coefficient of determination about zero.
    """
    pts = _check_points(points)
    if np.any(pts[:, 0] < 3):
        raise ValueError("need N >= 3 so that log log N > 0")
    x = np.log(pts[:, 0]) / np.log(np.log(pts[:, 0]))
    y = pts[:, 1]
    sxx = float(np.sum(x * x))
    slope = float(np.sum(x * y) / sxx)
    resid = y - slope * x
    n = len(x)
    stderr = float(np.sqrt(np.sum(resid**2) / (n - 1) / sxx)) if n > 1 else 0.0
    ss_tot = float(np.sum(y**2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return FitResult(exponent=slope, stderr=stderr, r_squared=r2, n_points=n)


def logratio_spread(points) -> float:
    """max/min over the grid of D * log log N / log N."""
    pts = _check_points(points)
    ratio = pts[:, 1] * np.log(np.log(pts[:, 0])) / np.log(pts[:, 0])
    return float(ratio.max() / ratio.min())


def theoretical_psi_bound(d: int, s: float) -> float:
    """Upper limit of the provable power-law exponent in the s > 2d regime."""
    if not s > 2 * d:
        raise ValueError(f"psi bound requires s > 2d, got s={s}, d={d}")
    return (s - 2 * d + 1) / (s - d + 2)


def classify_regime(d: int, s: float) -> str:
    """One of s_gt_2d, s_eq_2d, d_lt_s_lt_2d, s_eq_d; rejects s < d."""
    if s < d - REGIME_TOL:
        raise OutOfScopeError(
            f"s={s} < d={d}: diameter behavior not modeled in this regime"
        )
    if abs(s - d) <= REGIME_TOL:
        return "s_eq_d"
    if abs(s - 2 * d) <= REGIME_TOL:
        return "s_eq_2d"
    if s > 2 * d:
        return "s_gt_2d"
    return "d_lt_s_lt_2d"


def _run_item(args):
    cfg_dict, N, trial = args
    params = ModelParams(
        d=cfg_dict["d"], N=N, s=cfg_dict["s"], beta=cfg_dict["beta"],
        rho=cfg_dict["rho"], seed=cfg_dict["seed"],
    )
    return run_trial(
        params, trial, sampler=cfg_dict["sampler"],
        observables=cfg_dict["observables_enabled"],
        vertex_cap=cfg_dict["vertex_cap"],
    )


def summarize(config: SweepConfig, records: list) -> dict:
    """Per-N aggregates plus regime fits on per-N median diameters."""
    per_n = {}
    for n in config.N_grid:
        diams = np.array([r.diameter for r in records if r.params.N == n])
        if not len(diams):
            continue
        entry = {
            "trials": int(len(diams)),
            "diameter_mean": float(diams.mean()),
            "diameter_median": float(np.median(diams)),
            "diameter_q25": float(np.quantile(diams, 0.25)),
            "diameter_q75": float(np.quantile(diams, 0.75)),
        }
        obs_keys = sorted({k for r in records
                           if r.params.N == n for k in r.observables})
        for k in obs_keys:
            vals = [r.observables[k] for r in records
                    if r.params.N == n and k in r.observables]
            entry[f"obs_{k}_mean"] = float(np.mean(vals))
        per_n[str(n)] = entry
    summary = {
        "config": {
            "d": config.d, "s": config.s, "beta": config.beta,
            "rho": config.rho, "seed": config.seed,
            "N_grid": list(config.N_grid),
            "trials_per_N": config.trials_per_N,
        },
        "per_N": per_n,
    }
    try:
        summary["regime"] = classify_regime(config.d, config.s)
    except OutOfScopeError:
        summary["regime"] = "out_of_scope"
    points = [
        (int(n), e["diameter_median"])
        for n, e in per_n.items()
        if e["diameter_median"] > 0
    ]
    fits = {}
    if len({p[0] for p in points}) >= 3:
        fits["power"] = fit_power_law(points).as_dict()
        if all(p[0] > 1 for p in points):
            fits["polylog"] = fit_polylog(points).as_dict()
        if all(p[0] >= 3 for p in points):
            fits["logratio"] = fit_logratio(points).as_dict()
            fits["logratio"]["spread"] = logratio_spread(points)
    if config.s > 2 * config.d:
        fits["theoretical_psi_bound"] = theoretical_psi_bound(config.d, config.s)
    summary["fits"] = fits
    return summary


def run_sweep(config: SweepConfig, workers: int = 1):
    """Execute all (N, trial) items, persist CSV + JSON summary.

    Records are persisted incrementally in (N, trial) order; the summary
    is written next to the CSV with suffix .summary.json. Returns
    (records, summary).
    """
    cfg_dict = {
        "d": config.d, "s": config.s, "beta": config.beta, "rho": config.rho,
        "seed": config.seed, "sampler": config.sampler,
        "observables_enabled": config.observables_enabled,
        "vertex_cap": config.vertex_cap,
    }
    items = [
        (cfg_dict, N, t)
        for N in config.N_grid
        for t in range(config.trials_per_N)
    ]
    out_path = Path(config.output_path)
    records = []
    try:
        with open(out_path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            if workers > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    results = pool.map(_run_item, items, chunksize=4)
                    for rec in results:
                        if rec is not None:
                            records.append(rec)
                            fh.write(rec.csv_row() + "\n")
                            fh.flush()
            else:
                current_n = None
                for args in items:
                    if args[1] != current_n:
                        current_n = args[1]
                        log.info("sweep: N=%d (%d trials)",
                                 current_n, config.trials_per_N)
                    rec = _run_item(args)
                    if rec is not None:
                        records.append(rec)
                        fh.write(rec.csv_row() + "\n")
                        fh.flush()
    except OSError as exc:
        raise OSError(f"failed writing results to {out_path}: {exc}") from exc
    summary = summarize(config, records)
    summary_path = out_path.with_suffix(".summary.json")
    try:
        with open(summary_path, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing summary to {summary_path}: {exc}") from exc
    return records, summary


def parse_config(path) -> SweepConfig:
    """Flat key-value config: `key = value` lines, # comments.

    Keys: d, s, beta, rho, seed, N_grid (comma-separated), trials_per_N,
    output_path, observables_enabled, sampler, vertex_cap.
    """
    values = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    try:
        kwargs = {
            "d": int(values["d"]),
            "s": float(values["s"]),
            "beta": float(values["beta"]),
            "rho": float(values["rho"]),
            "seed": int(values.get("seed", "0")),
            "N_grid": [int(v) for v in values["N_grid"].split(",") if v.strip()],
            "trials_per_N": int(values["trials_per_N"]),
        }
    except KeyError as exc:
        raise ValueError(f"{path}: missing required config key {exc}") from exc
    if "output_path" in values:
        kwargs["output_path"] = values["output_path"]
    if "observables_enabled" in values:
        kwargs["observables_enabled"] = values["observables_enabled"].lower() in (
            "1", "true", "yes",
        )
    if "sampler" in values:
        kwargs["sampler"] = values["sampler"]
    if "vertex_cap" in values:
        kwargs["vertex_cap"] = int(values["vertex_cap"])
    return SweepConfig(**kwargs)
