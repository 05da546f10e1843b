"""Command-line entry point: simulate, sweep, fit, observables, selftest."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import experiment
from .edges import sample_edges_grid, sample_edges_naive
from .graphdist import Graph, component_of_origin, diameter_exact, diameter_ifub
from .model import (
    ModelParams,
    OutOfScopeError,
    ParityError,
    assemble_vertex_set,
    build_backbone,
    connection_probability,
)
from .edges import expected_edge_count
from .observables import (
    count_cut_intervals,
    count_isolated_intervals,
    degree_stats,
    dyadic_bands,
    edge_length_histogram,
)
from .rng import pair_uniforms, substream

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _fail(code: int, reason: str) -> int:
    print(f"error: {reason}", file=sys.stderr)
    return code


def _add_model_flags(p: argparse.ArgumentParser):
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)


def cmd_simulate(args) -> int:
    try:
        params = ModelParams(d=args.d, N=args.N, s=args.s, beta=args.beta,
                             rho=args.rho, seed=args.seed)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    rec = experiment.run_trial(params, args.trial, sampler=args.sampler,
                               observables=True)
    if rec is None:
        return _fail(EXIT_USAGE, "trial exceeded the vertex cap")
    payload = {
        "d": params.d, "N": params.N, "s": params.s, "beta": params.beta,
        "rho": params.rho, "seed": params.seed, "trial": rec.trial_index,
        "n_vertices": rec.n_vertices, "n_edges": rec.n_edges,
        "cluster_size": rec.cluster_size, "diameter": rec.diameter,
        "origin_corner_distance": rec.origin_corner_distance,
        "isolated_vertices": rec.isolated_vertex_count,
        "observables": rec.observables,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for k, v in payload.items():
            if k != "observables":
                print(f"{k}: {v}")
        for k, v in rec.observables.items():
            print(f"  {k}: {v:.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        config = experiment.parse_config(args.config)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_USAGE, f"invalid config: {exc}")
    if args.out:
        config.output_path = args.out
    workers = args.workers or os.cpu_count() or 1
    try:
        records, summary = experiment.run_sweep(config, workers=workers)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    print(f"wrote {len(records)} records to {config.output_path}")
    return EXIT_OK


def _read_fit_csv(path):
    import csv as _csv

    with open(path, newline="") as fh:
        reader = _csv.DictReader(fh)
        need = {"N", "diameter"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise ValueError(f"{path}: missing required columns {sorted(need)}")
        rows = [(int(r["N"]), float(r["diameter"])) for r in reader]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    per_n = {}
    for n, d in rows:
        per_n.setdefault(n, []).append(d)
    return [(n, float(np.median(v))) for n, v in sorted(per_n.items())]


def cmd_fit(args) -> int:
    try:
        points = _read_fit_csv(args.infile)
        fitter = {
            "power": experiment.fit_power_law,
            "polylog": experiment.fit_polylog,
            "logratio": experiment.fit_logratio,
        }[args.model]
        fit = fitter(points)
    except OSError as exc:
        return _fail(EXIT_USAGE, f"cannot read {args.infile}: {exc}")
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    out = {"model": args.model, **fit.as_dict()}
    if args.model == "logratio":
        out["spread"] = experiment.logratio_spread(points)
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def cmd_observables(args) -> int:
    try:
        params = ModelParams(d=args.d, N=args.N, s=args.s, beta=args.beta,
                             rho=args.rho, seed=args.seed)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    tseed = experiment.trial_seed(params.seed, params.N, args.trial)
    cloud = assemble_vertex_set(params, substream(tseed, "points"))
    el = sample_edges_grid(cloud, params, seed=tseed)
    graph = Graph.build(cloud, el)
    ds = degree_stats(graph)
    payload = {
        "n_vertices": cloud.n,
        "n_edges": len(el.pairs),
        "mean_degree": ds.mean_degree,
        "mean_degree_random": ds.mean_degree_random,
        "max_degree": ds.max_degree,
        "poisson_mean_degree": ds.poisson_mean_degree,
    }
    if params.d == 1:
        payload["cut_intervals_a1"] = count_cut_intervals(graph, 1.0)
        payload["isolated_intervals_a1"] = count_isolated_intervals(graph, 1.0)
    if args.histogram:
        bands = dyadic_bands(float(params.d * params.N))
        hist = edge_length_histogram(graph, bands)
        expected, expected_se = [], []
        for band in bands:
            est, se = expected_edge_count(params, band=band, n_samples=200_000)
            expected.append(est)
            expected_se.append(se)
        payload["edge_histogram"] = {
            "bands": [[lo, hi] for lo, hi in bands],
            "counts": hist.counts.tolist(),
            "poisson_only_counts": hist.poisson_only_counts.tolist(),
            "expected": expected,
            "expected_se": expected_se,
        }
    out = json.dumps(payload, sort_keys=True)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(out + "\n")
        except OSError as exc:
            return _fail(EXIT_IO, str(exc))
    else:
        print(out)
    return EXIT_OK


def _selftest_checks():
    yield "backbone properties", _check_backbone
    yield "connection function", _check_connection
    yield "sampler marginals", _check_marginals
    yield "ifub equals exact", _check_ifub


def _check_backbone():
    for d, N in [(1, 1), (1, 7), (2, 2), (2, 4), (3, 2)]:
        path = build_backbone(d, N)
        assert path.shape == ((N + 1) ** d, d)
        assert len(np.unique(path, axis=0)) == len(path)
        steps = np.abs(np.diff(path, axis=0)).sum(axis=1)
        assert (steps == 1).all()
        assert (path[0] == 0).all() and (path[-1] == N).all()


def _check_connection():
    p = ModelParams(d=1, N=4, s=2.0, beta=1.0, rho=1.0)
    r = np.linspace(0, 10, 101)
    g = connection_probability(r, p)
    assert ((g >= 0) & (g <= 1)).all()
    assert (np.diff(g) <= 1e-12).all()


def _check_marginals():
    params = ModelParams(d=1, N=6, s=2.0, beta=1.0, rho=1.0, seed=11)
    cloud = assemble_vertex_set(params, substream(123, "points"))
    n_rep = 400
    counts = {}
    for k in range(n_rep):
        el = sample_edges_naive(cloud, params, seed=k)
        for i, j in el.pairs:
            counts[(int(i), int(j))] = counts.get((int(i), int(j)), 0) + 1
    coords = cloud.coords
    bad = 0
    total = 0
    for i in range(cloud.n):
        for j in range(i + 1, cloud.n):
            if j == i + 1 and j <= cloud.backbone_count - 1:
                continue
            total += 1
            r = float(np.abs(coords[i] - coords[j]).sum())
            g = connection_probability(r, params)
            freq = counts.get((i, j), 0) / n_rep
            sigma = np.sqrt(max(g * (1 - g), 1e-12) / n_rep)
            if abs(freq - g) > 4 * sigma + 1e-9:
                bad += 1
    assert bad <= max(1, int(0.02 * total)), f"{bad}/{total} pairs off"


def _check_ifub():
    for k in range(20):
        params = ModelParams(d=1, N=24, s=[1.0, 1.5, 2.0, 3.0][k % 4],
                             beta=1.0, rho=1.0, seed=500 + k)
        tseed = experiment.trial_seed(params.seed, params.N, 0)
        cloud = assemble_vertex_set(params, substream(tseed, "points"))
        el = sample_edges_grid(cloud, params, seed=tseed)
        graph = Graph.build(cloud, el)
        cluster = component_of_origin(graph)
        assert (diameter_ifub(graph, cluster).diameter
                == diameter_exact(graph, cluster).diameter)


def cmd_selftest(args) -> int:
    for name, check in _selftest_checks():
        try:
            check()
        except AssertionError as exc:
            print(f"error: selftest failed: {name}: {exc}", file=sys.stderr)
            return EXIT_SELFTEST
        print(f"selftest ok: {name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percsim",
        description="Continuum long-range percolation simulator and "
        "diameter-scaling harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one trial and print its record")
    _add_model_flags(p)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--sampler", choices=["naive", "grid"], default="grid")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit a scaling law to a sweep CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--model", choices=["power", "polylog", "logratio"],
                   required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("observables", help="measure observables on one instance")
    _add_model_flags(p)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--histogram", action="store_true",
                   help="include dyadic edge-length band counts with the "
                   "analytic band expectations")
    p.add_argument("--out", default=None,
                   help="write the JSON payload to a file instead of stdout")
    p.set_defaults(func=cmd_observables)

    p = sub.add_parser("selftest", help="run the fast invariant suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ParityError, OutOfScopeError, ValueError) as exc:
        return _fail(EXIT_USAGE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
