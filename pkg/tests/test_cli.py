"""Command-line interface: subcommands, exit codes, stream discipline."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from rmpoly import LemmaReport, polynomial_from_json, read_points_csv
from rmpoly.cli import main
from rmpoly.harness import VerificationResult


@pytest.fixture()
def runner():
    return CliRunner()


class TestSample:
    def test_emits_polynomial_json_on_stdout(self, runner):
        res = runner.invoke(main, ["sample", "--n", "2", "--k", "3",
                                   "--seed", "5"])
        assert res.exit_code == 0
        p = polynomial_from_json(res.stdout)
        assert (p.n, p.k) == (2, 3)

    def test_same_seed_same_bytes(self, runner):
        args = ["sample", "--n", "2", "--k", "2", "--seed", "9"]
        assert runner.invoke(main, args).stdout == \
            runner.invoke(main, args).stdout

    def test_out_writes_file(self, runner, tmp_path):
        out = tmp_path / "poly.json"
        res = runner.invoke(main, ["sample", "--n", "2", "--k", "2",
                                   "--out", str(out)])
        assert res.exit_code == 0
        assert res.stdout == ""
        assert polynomial_from_json(out.read_text()).n == 2

    def test_invalid_dimension_exits_one(self, runner):
        res = runner.invoke(main, ["sample", "--n", "0", "--k", "2"])
        assert res.exit_code == 1
        assert "error:" in res.stderr


class TestEsd:
    def test_stdout_csv_has_all_scaled_eigenvalues(self, runner):
        res = runner.invoke(main, ["esd", "--n", "2", "--k", "2",
                                   "--trials", "3", "--seed", "1"])
        assert res.exit_code == 0
        lines = res.stdout.strip().split("\n")
        assert lines[0] == "re,im"
        assert len(lines) == 1 + 2 * 2 * 3

    def test_grow_n_is_the_rescaled_grow_k_cloud(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["esd", "--n", "4", "--k", "3", "--trials", "2", "--seed", "3"]
        assert runner.invoke(main, base + ["--regime", "grow-n",
                                           "--out", str(a)]).exit_code == 0
        assert runner.invoke(main, base + ["--regime", "grow-k",
                                           "--out", str(b)]).exit_code == 0
        scaled = read_points_csv(a)
        unscaled = read_points_csv(b)
        assert np.array_equal(scaled, 4 ** -0.5 * unscaled)

    def test_nonpositive_trials_exit_one(self, runner):
        res = runner.invoke(main, ["esd", "--n", "2", "--k", "2",
                                   "--trials", "0"])
        assert res.exit_code == 1
        assert "trials" in res.stderr


class TestExperiment:
    BASE = ["experiment", "--regime", "grow-n", "--n", "8", "--k", "2",
            "--target-points", "320", "--seed", "11"]

    def test_run_writes_summary_and_points(self, runner, tmp_path):
        res = runner.invoke(main, self.BASE + ["--out", str(tmp_path)])
        assert res.exit_code == 0
        summary = tmp_path / "result_grow-n_seed11.json"
        assert str(summary) in res.stdout
        doc = json.loads(summary.read_text())
        assert doc["seed"] == 11
        assert (tmp_path / doc["cells"][0]["points_file"]).exists()

    def test_quiet_suppresses_progress(self, runner, tmp_path):
        res = runner.invoke(main, ["--quiet"] + self.BASE
                            + ["--out", str(tmp_path)])
        assert res.exit_code == 0
        assert "cell" not in res.stderr
        res = runner.invoke(main, self.BASE + ["--out", str(tmp_path)])
        assert "cell" in res.stderr

    def test_flags_override_config_file(self, runner, tmp_path):
        cfg = {"regime": "grow-n", "n_values": [8], "k_values": [2],
               "target_points": 320, "seed": 3}
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        res = runner.invoke(main, ["experiment", "--config", str(cfg_path),
                                   "--seed", "11", "--out", str(tmp_path)])
        assert res.exit_code == 0
        assert (tmp_path / "result_grow-n_seed11.json").exists()

    def test_config_alone_is_sufficient(self, runner, tmp_path):
        cfg = {"regime": "grow-k", "n_values": [2], "k_values": [8],
               "target_points": 64, "seed": 2}
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        res = runner.invoke(main, ["experiment", "--config", str(cfg_path),
                                   "--out", str(tmp_path)])
        assert res.exit_code == 0
        assert (tmp_path / "result_grow-k_seed2.json").exists()

    def test_malformed_config_exits_one(self, runner, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text("{not json")
        res = runner.invoke(main, ["experiment", "--config", str(cfg_path),
                                   "--out", str(tmp_path)])
        assert res.exit_code == 1
        assert "cannot load config" in res.stderr

    def test_missing_axes_exit_one(self, runner, tmp_path):
        res = runner.invoke(main, ["experiment", "--regime", "grow-n",
                                   "--out", str(tmp_path)])
        assert res.exit_code == 1
        assert "missing" in res.stderr

    def test_infeasible_cell_exits_one(self, runner, tmp_path):
        res = runner.invoke(main, ["experiment", "--regime", "grow-n",
                                   "--n", "64", "--k", "2",
                                   "--target-points", "10",
                                   "--out", str(tmp_path)])
        assert res.exit_code == 1
        assert "infeasible" in res.stderr

    def test_svg_format_renders_scatter(self, runner, tmp_path):
        res = runner.invoke(main, self.BASE + ["--format", "svg",
                                               "--out", str(tmp_path)])
        assert res.exit_code == 0
        svg = (tmp_path / "scatter_grow-n_n8_k2_seed11.svg").read_text()
        assert svg.count('class="pt"') == 320

    def test_reruns_are_byte_identical(self, runner, tmp_path):
        dir_a, dir_b = tmp_path / "a", tmp_path / "b"
        for d in (dir_a, dir_b):
            assert runner.invoke(main, self.BASE
                                 + ["--out", str(d)]).exit_code == 0
        for name in ("result_grow-n_seed11.json",
                     "points_grow-n_n8_k2_seed11.csv"):
            assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()

    def test_unknown_regime_is_a_usage_error(self, runner, tmp_path):
        res = runner.invoke(main, ["experiment", "--regime", "grow-both",
                                   "--n", "8", "--k", "2",
                                   "--out", str(tmp_path)])
        assert res.exit_code == 2

    def test_malformed_z_is_a_usage_error(self, runner, tmp_path):
        res = runner.invoke(main, self.BASE + ["--z", "1,2,3",
                                               "--out", str(tmp_path)])
        assert res.exit_code == 2
        assert "re,im" in res.stderr


class TestVerify:
    SMALL = ["verify", "--trials", "2", "--instances", "5",
             "--mc-trials", "50"]

    def test_small_run_passes_and_reports_jsonl(self, runner):
        res = runner.invoke(main, self.SMALL)
        assert res.exit_code == 0
        lines = res.stdout.strip().split("\n")
        assert len(lines) == 17
        assert all("lemma_id" in json.loads(line) for line in lines)
        assert "verification passed" in res.stderr

    def test_out_writes_jsonl_file(self, runner, tmp_path):
        out = tmp_path / "reports.jsonl"
        res = runner.invoke(main, self.SMALL + ["--out", str(out)])
        assert res.exit_code == 0
        assert res.stdout == ""
        assert len(out.read_text().strip().split("\n")) == 17

    def test_z_flags_feed_both_suites(self, runner):
        res = runner.invoke(main, self.SMALL + ["--z", "0.6,0.2",
                                                "--z", "0.4"])
        assert res.exit_code == 0

    def test_zero_shift_exits_one(self, runner):
        res = runner.invoke(main, self.SMALL + ["--z", "0", "--z", "0.5"])
        assert res.exit_code == 1
        assert "nonzero shift" in res.stderr

    def test_violations_exit_three(self, runner, monkeypatch):
        stub = VerificationResult(
            reports=(LemmaReport("stub-check", (-1.0,)),))
        monkeypatch.setattr("rmpoly.cli.run_verification",
                            lambda *a, **kw: stub)
        res = runner.invoke(main, ["verify"])
        assert res.exit_code == 3
        assert "FAILED" in res.stderr
        assert "1 VIOLATIONS" in res.stderr


class TestPlot:
    def test_renders_svg(self, runner, tmp_path):
        src = tmp_path / "pts.csv"
        src.write_text("re,im\n1.0,0.0\n0.0,1.0\n")
        out = tmp_path / "plot.svg"
        res = runner.invoke(main, ["plot", str(src), "--out", str(out)])
        assert res.exit_code == 0
        svg = out.read_text()
        assert svg.count('class="pt"') == 2
        assert svg.count('class="unit-circle"') == 1

    def test_unit_circle_overlay_can_be_disabled(self, runner, tmp_path):
        src = tmp_path / "pts.csv"
        src.write_text("re,im\n1.0,0.0\n")
        out = tmp_path / "plot.svg"
        res = runner.invoke(main, ["plot", str(src), "--out", str(out),
                                   "--no-unit-circle"])
        assert res.exit_code == 0
        assert "unit-circle" not in out.read_text()

    def test_missing_file_is_a_usage_error(self, runner, tmp_path):
        res = runner.invoke(main, ["plot", str(tmp_path / "nope.csv"),
                                   "--out", str(tmp_path / "o.svg")])
        assert res.exit_code == 2

    def test_headerless_file_exits_one_without_output(self, runner, tmp_path):
        src = tmp_path / "pts.csv"
        src.write_text("re,im\n")
        out = tmp_path / "plot.svg"
        res = runner.invoke(main, ["plot", str(src), "--out", str(out)])
        assert res.exit_code == 1
        assert not out.exists()
