import json

import numpy as np
import pytest

from percplots import PlotSpec, plot_diameter_scaling, plot_edge_histogram
from percplots.cli import EXIT_OK, EXIT_USAGE, main

from conftest import write_histogram, write_sweep


class TestDiameterScaling:
    def test_exact_sqrt_annotation(self, sqrt_sweep, tmp_path):
        csv_path, summary_path, summary = sqrt_sweep
        report = plot_diameter_scaling(PlotSpec(
            csv_path=str(csv_path), summary_path=str(summary_path),
            output_path=str(tmp_path / "diam.png"),
        ))
        assert report["annotation"].endswith("0.50")
        assert (tmp_path / "diam.png").stat().st_size > 0

    def test_linear_data_annotation(self, tmp_path):
        csv_path, summary_path, _ = write_sweep(
            tmp_path, [8, 16, 32, 64], lambda n: float(n), s=3.0)
        report = plot_diameter_scaling(PlotSpec(
            csv_path=str(csv_path), summary_path=str(summary_path),
            output_path=str(tmp_path / "lin.png"),
        ))
        assert report["annotation"].endswith("1.00")

    def test_annotation_matches_summary_to_2_decimals(self, sqrt_sweep, tmp_path):
        csv_path, summary_path, summary = sqrt_sweep
        report = plot_diameter_scaling(PlotSpec(
            csv_path=str(csv_path), summary_path=str(summary_path),
            output_path=str(tmp_path / "d.png"),
        ))
        want = f"{summary['fits']['power']['exponent']:.2f}"
        assert report["annotation"].split()[-1] == want

    def test_logratio_regime_reference_curve(self, tmp_path):
        n_values = [64, 256, 1024, 4096]
        rows = ["N,diameter"]
        for n in n_values:
            d = 2.0 * np.log(n) / np.log(np.log(n))
            rows += [f"{n},{d}"] * 3
        csv_path = tmp_path / "s1.csv"
        csv_path.write_text("\n".join(rows) + "\n")
        summary = {
            "regime": "s_eq_d",
            "fits": {"logratio": {"exponent": 2.0, "intercept": 0.0,
                                  "stderr": 0.0, "r_squared": 1.0,
                                  "n_points": 4}},
        }
        summary_path = tmp_path / "s1.summary.json"
        summary_path.write_text(json.dumps(summary))
        report = plot_diameter_scaling(PlotSpec(
            csv_path=str(csv_path), summary_path=str(summary_path),
            output_path=str(tmp_path / "s1.png"),
        ))
        assert report["axis_mode"] == "semilog-x"
        assert report["annotation"].endswith("2.00")

    def test_missing_column_rejected(self, tmp_path, sqrt_sweep):
        _, summary_path, _ = sqrt_sweep
        bad = tmp_path / "bad.csv"
        bad.write_text("N,other\n8,1\n16,2\n32,3\n")
        with pytest.raises(ValueError, match="missing required columns"):
            plot_diameter_scaling(PlotSpec(
                csv_path=str(bad), summary_path=str(summary_path),
                output_path=str(tmp_path / "x.png"),
            ))

    def test_too_few_N_rejected(self, tmp_path, sqrt_sweep):
        _, summary_path, _ = sqrt_sweep
        short = tmp_path / "short.csv"
        short.write_text("N,diameter\n8,3\n16,4\n")
        with pytest.raises(ValueError, match="3 distinct N"):
            plot_diameter_scaling(PlotSpec(
                csv_path=str(short), summary_path=str(summary_path),
                output_path=str(tmp_path / "x.png"),
            ))

    def test_inconsistent_axis_mode_rejected(self, sqrt_sweep, tmp_path):
        csv_path, summary_path, _ = sqrt_sweep
        with pytest.raises(ValueError, match="inconsistent"):
            plot_diameter_scaling(PlotSpec(
                csv_path=str(csv_path), summary_path=str(summary_path),
                output_path=str(tmp_path / "x.png"), axis_mode="linear",
            ))


class TestEdgeHistogram:
    def test_renders_and_totals(self, histogram_file, tmp_path):
        report = plot_edge_histogram(PlotSpec(
            observables_path=str(histogram_file),
            output_path=str(tmp_path / "hist.png"),
        ))
        assert report["annotation"] == "total edges: 77"
        assert report["n_bands"] == 4

    def test_empty_histogram_renders(self, tmp_path):
        path = write_histogram(tmp_path, [(0.0, 1.0), (1.0, 2.0)],
                               [0, 0], [0.0, 0.0])
        report = plot_edge_histogram(PlotSpec(
            observables_path=str(path),
            output_path=str(tmp_path / "empty.png"),
        ))
        assert report["annotation"] == "total edges: 0"

    def test_missing_block_rejected(self, tmp_path):
        path = tmp_path / "obs.json"
        path.write_text("{}")
        with pytest.raises(ValueError, match="edge_histogram"):
            plot_edge_histogram(PlotSpec(
                observables_path=str(path),
                output_path=str(tmp_path / "x.png"),
            ))


class TestCli:
    def test_diameter_subcommand(self, sqrt_sweep, tmp_path, capsys):
        csv_path, summary_path, _ = sqrt_sweep
        code = main(["diameter", "--csv", str(csv_path),
                     "--summary", str(summary_path),
                     "--out", str(tmp_path / "d.png")])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "0.50" in out

    def test_histogram_subcommand(self, histogram_file, tmp_path, capsys):
        code = main(["histogram", "--observables", str(histogram_file),
                     "--out", str(tmp_path / "h.png")])
        assert code == EXIT_OK

    def test_bad_input_is_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        summary = tmp_path / "s.json"
        summary.write_text("{}")
        code = main(["diameter", "--csv", str(bad), "--summary", str(summary),
                     "--out", str(tmp_path / "x.png")])
        assert code == EXIT_USAGE
        assert capsys.readouterr().err.startswith("error:")

    def test_no_command_is_usage_error(self, capsys):
        assert main([]) == EXIT_USAGE
