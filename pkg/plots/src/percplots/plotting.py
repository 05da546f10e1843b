"""Render sweep results into figures.

This package is a read-only consumer of the simulator's file formats: the
sweep CSV (columns include N and diameter), the sweep summary JSON (per-N
aggregates and fitted exponents), and the observables JSON with an
``edge_histogram`` block. All fits are taken verbatim from the summary
JSON; the only statistics computed here are per-N quantiles for whiskers.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

AXIS_MODES = ("loglog", "semilog-x", "linear")

# regimes whose fitted curve is a power law live on log-log axes; the
# logarithmic regimes read better with a log-scaled N axis only
_DEFAULT_AXIS = {
    "s_gt_2d": "loglog",
    "s_eq_2d": "loglog",
    "d_lt_s_lt_2d": "semilog-x",
    "s_eq_d": "semilog-x",
}


@dataclass
class PlotSpec:
    """Inputs and rendering choices for one figure."""

    csv_path: str | None = None
    summary_path: str | None = None
    observables_path: str | None = None
    regime_label: str = ""
    output_path: str = "figure.png"
    axis_mode: str | None = None  # None: choose from the summary regime


def _save(fig: Figure, path: str):
    """Write the figure without volatile metadata, so identical inputs
    yield identical bytes."""
    out = Path(path)
    kind = out.suffix.lstrip(".").lower() or "png"
    meta = {"Software": None} if kind == "png" else {"Date": None}
    FigureCanvasAgg(fig)
    fig.savefig(out, format=kind, dpi=120, metadata=meta)


def _read_sweep_csv(path) -> dict:
    """Per-N diameter samples from a sweep CSV."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"N", "diameter"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise ValueError(f"{path}: missing required columns {sorted(need)}")
        per_n = {}
        for row in reader:
            per_n.setdefault(int(row["N"]), []).append(float(row["diameter"]))
    if len(per_n) < 3:
        raise ValueError(f"{path}: need at least 3 distinct N values")
    return per_n


def _read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _fit_curve(summary: dict, n_values: np.ndarray):
    """Fitted D(N) curve, its annotation text, and the regime's fit name."""
    regime = summary.get("regime", "")
    fits = summary.get("fits", {})
    grid = np.geomspace(n_values.min(), n_values.max(), 200)
    if regime in ("s_gt_2d", "s_eq_2d") and "power" in fits:
        f = fits["power"]
        curve = np.exp(f["intercept"]) * grid ** f["exponent"]
        return grid, curve, f"fitted exponent: {f['exponent']:.2f}", regime
    if regime == "d_lt_s_lt_2d" and "polylog" in fits:
        f = fits["polylog"]
        curve = np.exp(f["intercept"]) * np.log(grid) ** f["exponent"]
        return grid, curve, f"fitted log exponent: {f['exponent']:.2f}", regime
    if regime == "s_eq_d" and "logratio" in fits:
        f = fits["logratio"]
        curve = f["exponent"] * np.log(grid) / np.log(np.log(grid))
        return grid, curve, f"fitted coefficient: {f['exponent']:.2f}", regime
    if "power" in fits:  # unknown regime: fall back to the power fit
        f = fits["power"]
        curve = np.exp(f["intercept"]) * grid ** f["exponent"]
        return grid, curve, f"fitted exponent: {f['exponent']:.2f}", regime
    raise ValueError("summary JSON carries no usable fit")


def plot_diameter_scaling(spec: PlotSpec) -> dict:
    """Per-N median diameters with interquartile whiskers and the fitted
    curve from the summary JSON; for the steep regime the provable
    power-law slope is drawn as a dashed reference line.

    Returns a small report dict (output path, annotation, point count).
    """
    if spec.csv_path is None or spec.summary_path is None:
        raise ValueError("diameter plot needs csv_path and summary_path")
    per_n = _read_sweep_csv(spec.csv_path)
    summary = _read_json(spec.summary_path)
    n_values = np.array(sorted(per_n))
    med = np.array([np.median(per_n[n]) for n in n_values])
    q25 = np.array([np.quantile(per_n[n], 0.25) for n in n_values])
    q75 = np.array([np.quantile(per_n[n], 0.75) for n in n_values])

    grid, curve, annotation, regime = _fit_curve(summary, n_values)
    axis_mode = spec.axis_mode or _DEFAULT_AXIS.get(regime, "loglog")
    if axis_mode not in AXIS_MODES:
        raise ValueError(f"unknown axis mode {spec.axis_mode!r}")
    if axis_mode == "linear" and regime in _DEFAULT_AXIS:
        raise ValueError(f"linear axes are inconsistent with regime {regime}")

    fig = Figure(figsize=(6.0, 4.2))
    ax = fig.add_subplot(111)
    ax.errorbar(n_values, med, yerr=[med - q25, q75 - med], fmt="o",
                color="#2b5d8c", capsize=3, label="median (IQR)")
    ax.plot(grid, curve, color="#c4452c", label=annotation)
    theo = summary.get("fits", {}).get("theoretical_psi_bound")
    if theo is not None:
        ref = med[0] * (grid / grid[0]) ** theo
        ax.plot(grid, ref, "--", color="#777777",
                label=f"provable slope {theo:.2f}")
    if axis_mode == "loglog":
        ax.set_xscale("log")
        ax.set_yscale("log")
    elif axis_mode == "semilog-x":
        ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("graph diameter")
    title = spec.regime_label or regime
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    _save(fig, spec.output_path)
    return {"output": spec.output_path, "annotation": annotation,
            "n_points": len(n_values), "axis_mode": axis_mode}


def plot_edge_histogram(spec: PlotSpec) -> dict:
    """Log-log band counts against the analytic band expectation.

    Reads the ``edge_histogram`` block of an observables JSON; the
    expectation curve gets a 3-standard-error ribbon.
    """
    if spec.observables_path is None:
        raise ValueError("histogram plot needs observables_path")
    payload = _read_json(spec.observables_path)
    if "edge_histogram" not in payload:
        raise ValueError(f"{spec.observables_path}: no edge_histogram block")
    hist = payload["edge_histogram"]
    bands = np.asarray(hist["bands"], dtype=float)
    counts = np.asarray(hist["counts"], dtype=float)
    expected = np.asarray(hist["expected"], dtype=float)
    se = np.asarray(hist.get("expected_se", np.zeros(len(bands))), dtype=float)
    centers = np.sqrt(np.maximum(bands[:, 0], 1e-12) * bands[:, 1])

    total = int(counts.sum())
    annotation = f"total edges: {total}"
    fig = Figure(figsize=(6.0, 4.2))
    ax = fig.add_subplot(111)
    ax.plot(centers, counts, "o", color="#2b5d8c", label="band counts")
    ax.plot(centers, expected, color="#c4452c", label="analytic expectation")
    ax.fill_between(centers, np.maximum(expected - 3 * se, 0),
                    expected + 3 * se, color="#c4452c", alpha=0.2,
                    linewidth=0, label="3 SE")
    ax.set_xscale("log")
    if counts.max() > 0 or expected.max() > 0:
        ax.set_yscale("log")
        floor = 0.1
        ax.set_ylim(bottom=floor)
    ax.set_xlabel("edge length band center")
    ax.set_ylabel("edge count")
    title = spec.regime_label or "edge-length histogram"
    ax.set_title(f"{title} ({annotation})")
    ax.legend(frameon=False)
    fig.tight_layout()
    _save(fig, spec.output_path)
    return {"output": spec.output_path, "annotation": annotation,
            "n_bands": len(bands)}
