import json

import numpy as np
import pytest

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


CSV_HEADER = (
    "d,N,s,beta,rho,seed,trial,n_vertices,n_edges,cluster_size,"
    "diameter,origin_corner_distance,isolated_vertices,wall_time_s"
)


def write_sweep(tmp_path, n_values, diameter_fn, s=3.0, trials=3):
    """Synthetic sweep CSV plus a consistent summary JSON."""
    rows = [CSV_HEADER]
    for n in n_values:
        for t in range(trials):
            d = diameter_fn(n)
            rows.append(f"1,{n},{s:g},1,1,0,{t},{n+1},{n},{n+1},"
                        f"{d:g},{d:g},0,0.001")
    csv_path = tmp_path / "sweep.csv"
    csv_path.write_text("\n".join(rows) + "\n")

    logn = np.log(np.asarray(n_values, dtype=float))
    logd = np.log([diameter_fn(n) for n in n_values])
    slope, intercept = np.polyfit(logn, logd, 1)
    fits = {
        "power": {"exponent": float(slope), "intercept": float(intercept),
                  "stderr": 0.0, "r_squared": 1.0, "n_points": len(n_values)},
    }
    if s > 2:
        fits["theoretical_psi_bound"] = (s - 1) / (s + 1)
    summary = {
        "config": {"d": 1, "s": s, "beta": 1.0, "rho": 1.0, "seed": 0,
                   "N_grid": list(n_values), "trials_per_N": trials},
        "regime": "s_gt_2d" if s > 2 else "s_eq_2d",
        "per_N": {
            str(n): {"trials": trials, "diameter_median": diameter_fn(n)}
            for n in n_values
        },
        "fits": fits,
    }
    summary_path = tmp_path / "sweep.summary.json"
    summary_path.write_text(json.dumps(summary, sort_keys=True))
    return csv_path, summary_path, summary


def write_histogram(tmp_path, bands, counts, expected, se=None):
    payload = {
        "n_vertices": 100,
        "n_edges": int(sum(counts)),
        "edge_histogram": {
            "bands": [list(b) for b in bands],
            "counts": list(counts),
            "poisson_only_counts": list(counts),
            "expected": list(expected),
            "expected_se": list(se if se is not None else [0.0] * len(bands)),
        },
    }
    path = tmp_path / "observables.json"
    path.write_text(json.dumps(payload, sort_keys=True))
    return path


@pytest.fixture
def sqrt_sweep(tmp_path):
    return write_sweep(tmp_path, [16, 64, 256, 1024],
                       lambda n: 3.0 * n**0.5, s=3.0)


@pytest.fixture
def histogram_file(tmp_path):
    bands = [(0.0, 1.0), (1.0, 2.0), (2.0, 4.0), (4.0, 8.0)]
    counts = [40, 22, 11, 4]
    expected = [41.0, 20.5, 10.2, 5.1]
    se = [1.0, 0.7, 0.5, 0.3]
    return write_histogram(tmp_path, bands, counts, expected, se)
