"""Experiment harness: config validation, persistence, runs, verification."""

import json

import numpy as np
import pytest

from rmpoly import (DiscMixture, EmpiricalSpectralDistribution,
                    ExperimentConfig, RngStream, ValidationError,
                    distance_report, export_result, read_points_csv,
                    render_scatter, run_experiment, run_grow_k, run_grow_n,
                    run_verification, svg_scatter, write_points_csv)
from rmpoly.harness import SCHEMA_VERSION


def _small_cfg(**overrides):
    kwargs = dict(regime="grow-n", n_values=(8,), k_values=(2,),
                  target_points=320, seed=11)
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


class TestExperimentConfig:
    def test_defaults(self):
        cfg = ExperimentConfig(regime="grow-n", n_values=(32,), k_values=(3,))
        assert cfg.target_points == 20000
        assert cfg.seed == 7
        assert cfg.z_values == (0.7 + 0.3j, 0.5 + 0.0j)
        assert cfg.atom_radius == 0.2
        assert cfg.format == "csv"
        assert cfg.workers == 1

    def test_rejects_unknown_regime(self):
        with pytest.raises(ValidationError, match="regime"):
            _small_cfg(regime="grow-both")

    def test_rejects_empty_axes(self):
        with pytest.raises(ValidationError, match="nonempty"):
            _small_cfg(n_values=())

    def test_rejects_nonpositive_sizes(self):
        with pytest.raises(ValidationError, match=">= 1"):
            _small_cfg(n_values=(0,))

    def test_grow_n_needs_single_k(self):
        with pytest.raises(ValidationError, match="exactly one k"):
            _small_cfg(k_values=(2, 3))

    def test_grow_k_needs_single_n(self):
        with pytest.raises(ValidationError, match="exactly one n"):
            _small_cfg(regime="grow-k", n_values=(2, 3))

    @pytest.mark.parametrize("field,value,pattern", [
        ("target_points", 0, "target_points"),
        ("seed", -1, "seed"),
        ("z_values", (), "z_values"),
        ("atom_radius", 0.0, "atom_radius"),
        ("atom_radius", 1.5, "atom_radius"),
        ("format", "png", "format"),
        ("workers", 0, "workers"),
    ])
    def test_rejects_bad_scalars(self, field, value, pattern):
        with pytest.raises(ValidationError, match=pattern):
            _small_cfg(**{field: value})

    def test_rejects_infeasible_cell(self):
        # One trial of the (64, 2) cell would already overshoot the target.
        with pytest.raises(ValidationError, match="infeasible"):
            _small_cfg(n_values=(64,), target_points=100)

    def test_cells_follow_the_swept_axis(self):
        cfg = ExperimentConfig(regime="grow-n", n_values=(16, 32),
                               k_values=(3,))
        assert cfg.cells() == [(16, 3), (32, 3)]
        cfg = ExperimentConfig(regime="grow-k", n_values=(2,),
                               k_values=(8, 32))
        assert cfg.cells() == [(2, 8), (2, 32)]

    def test_trials_keep_pooled_points_near_target(self):
        cfg = _small_cfg()
        assert cfg.trials_for(8, 2) == 20  # ceil(320 / 16)
        assert cfg.trials_for(7, 2) == 23  # ceil(320 / 14), rounds up

    def test_json_round_trip(self):
        cfg = ExperimentConfig(regime="grow-k", n_values=(2,),
                               k_values=(8, 16), seed=5,
                               z_values=(0.5 + 0.25j,), workers=2)
        doc = cfg.to_json_dict()
        assert doc["schema_version"] == SCHEMA_VERSION
        assert ExperimentConfig.from_json_dict(doc) == cfg

    def test_json_round_trip_survives_serialization(self):
        cfg = _small_cfg()
        doc = json.loads(json.dumps(cfg.to_json_dict()))
        assert ExperimentConfig.from_json_dict(doc) == cfg

    def test_from_json_rejects_non_object(self):
        with pytest.raises(ValidationError, match="JSON object"):
            ExperimentConfig.from_json_dict(["grow-n"])

    def test_from_json_rejects_unknown_fields(self):
        doc = _small_cfg().to_json_dict()
        doc["n_max"] = 12
        with pytest.raises(ValidationError, match="n_max"):
            ExperimentConfig.from_json_dict(doc)

    def test_from_json_rejects_other_schema_versions(self):
        doc = _small_cfg().to_json_dict()
        doc["schema_version"] = 99
        with pytest.raises(ValidationError, match="schema_version"):
            ExperimentConfig.from_json_dict(doc)

    def test_from_json_rejects_missing_required_fields(self):
        with pytest.raises(ValidationError, match="missing"):
            ExperimentConfig.from_json_dict({"regime": "grow-n"})

    def test_overrides_win_over_document(self):
        doc = _small_cfg().to_json_dict()
        cfg = ExperimentConfig.from_json_dict(doc, seed=123, workers=2)
        assert cfg.seed == 123
        assert cfg.workers == 2

    def test_none_overrides_are_skipped(self):
        doc = _small_cfg(seed=11).to_json_dict()
        cfg = ExperimentConfig.from_json_dict(doc, seed=None)
        assert cfg.seed == 11

    def test_z_values_parsed_from_pairs(self):
        doc = _small_cfg().to_json_dict()
        doc["z_values"] = [[0.25, -0.5]]
        cfg = ExperimentConfig.from_json_dict(doc)
        assert cfg.z_values == (0.25 - 0.5j,)


class TestPointsCsv:
    def test_round_trip_is_exact(self, tmp_path):
        pts = np.array([1 / 3 + 1e-17j, -0.0 - 2.5j, 1e300 + 0j,
                        7.123456789012345e-08 + 0.1j])
        path = tmp_path / "pts.csv"
        write_points_csv(pts, path)
        back = read_points_csv(path)
        assert np.array_equal(back, pts)

    def test_header_line(self, tmp_path):
        path = tmp_path / "pts.csv"
        write_points_csv([1.0 + 2.0j], path)
        assert path.read_text().splitlines()[0] == "re,im"

    def test_missing_file_reports_path(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            read_points_csv(tmp_path / "nope.csv")

    def test_wrong_header_reports_line_one(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(ValidationError, match=r":1:"):
            read_points_csv(path)

    def test_wrong_field_count_reports_line(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("re,im\n1.0,2.0\n3.0\n")
        with pytest.raises(ValidationError, match=r":3:"):
            read_points_csv(path)

    def test_non_numeric_field_reports_line(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("re,im\nfoo,2.0\n")
        with pytest.raises(ValidationError, match=r":2:"):
            read_points_csv(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("")
        with pytest.raises(ValidationError, match="re,im"):
            read_points_csv(path)

    def test_header_only_rejected(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("re,im\n")
        with pytest.raises(ValidationError, match="no points"):
            read_points_csv(path)


class TestRenderScatter:
    def test_four_points_four_glyphs_one_circle(self, tmp_path):
        src = tmp_path / "pts.csv"
        write_points_csv([1 + 0j, -1 + 0j, 1j, -1j], src)
        out = tmp_path / "plot.svg"
        render_scatter(src, out)
        svg = out.read_text()
        assert svg.count('class="pt"') == 4
        assert svg.count('class="unit-circle"') == 1

    def test_rendering_is_byte_deterministic(self, tmp_path):
        src = tmp_path / "pts.csv"
        write_points_csv([0.5 + 0.25j, -0.125 + 0j], src)
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render_scatter(src, a)
        render_scatter(src, b)
        assert a.read_bytes() == b.read_bytes()

    def test_empty_input_writes_nothing(self, tmp_path):
        src = tmp_path / "pts.csv"
        src.write_text("re,im\n")
        out = tmp_path / "plot.svg"
        with pytest.raises(ValidationError):
            render_scatter(src, out)
        assert not out.exists()

    def test_coordinates_pinned_to_six_decimals(self, tmp_path):
        src = tmp_path / "pts.csv"
        write_points_csv([0.1 + 0.1j], src)
        out = tmp_path / "plot.svg"
        render_scatter(src, out)
        for token in out.read_text().split('"'):
            try:
                float(token)
            except ValueError:
                continue
            if "." in token:
                assert len(token.split(".")[1]) == 6

    def test_circle_overlay_is_optional(self):
        svg = svg_scatter([1 + 0j], overlay_unit_circle=False)
        assert 'unit-circle' not in svg

    def test_nonfinite_points_rejected(self):
        with pytest.raises(ValidationError, match="NaN"):
            svg_scatter([np.nan + 0j])


class TestRunGrowN:
    def test_rejects_wrong_regime(self):
        cfg = ExperimentConfig(regime="grow-k", n_values=(2,), k_values=(8,),
                               target_points=64)
        with pytest.raises(ValidationError, match="grow-n"):
            run_grow_n(cfg)

    def test_point_count_is_exact(self):
        res = run_grow_n(_small_cfg())
        cell = res.cells[0]
        assert cell.trials == 20
        assert cell.report is not None
        esd_points = cell.trials * 8 * 2
        assert esd_points == 320

    def test_circle_law_anchor_cell(self):
        # k = 1 reduces to the classical circular law.  At n = 32 the exact
        # expected radial CDF still deviates from the disc law by 0.0703
        # (edge effects), so the KS sits just above that floor while the
        # binned discrepancy -- which spreads the edge strip over cells --
        # is already well under 0.05.
        cfg = ExperimentConfig(regime="grow-n", n_values=(32,), k_values=(1,))
        cell = run_grow_n(cfg).cells[0]
        assert cell.trials == 625
        assert cell.report.radial_ks <= 0.09
        assert cell.report.discrepancy <= 0.05
        assert cell.report.angular_ks <= 0.02

    def test_atom_mass_sweep_reported_and_monotone(self):
        res = run_grow_n(_small_cfg())
        extras = res.cells[0].extras
        assert set(extras) == {"atom_mass_r0.1", "atom_mass_r0.2",
                               "atom_mass_r0.3"}
        assert (extras["atom_mass_r0.1"] <= extras["atom_mass_r0.2"]
                <= extras["atom_mass_r0.3"])

    def test_reruns_are_identical(self):
        cfg = _small_cfg()
        a = run_grow_n(cfg)
        b = run_grow_n(cfg)
        assert a.cells[0].report == b.cells[0].report
        assert a.cells[0].extras == b.cells[0].extras

    def test_explicit_rng_matches_seeded_default(self):
        cfg = _small_cfg()
        a = run_grow_n(cfg)
        b = run_grow_n(cfg, RngStream(cfg.seed))
        assert a.cells[0].report == b.cells[0].report

    def test_run_experiment_dispatches_on_regime(self):
        cfg = _small_cfg()
        assert run_experiment(cfg).cells[0].report == \
            run_grow_n(cfg).cells[0].report


class TestRunGrowK:
    def test_rejects_wrong_regime(self):
        with pytest.raises(ValidationError, match="grow-k"):
            run_grow_k(_small_cfg())

    def test_scalar_cells_reproduce_root_clustering(self):
        # n = 1 is the classical scalar random polynomial: roots cluster at
        # the unit circle with near-uniform angles as the degree grows.
        cfg = ExperimentConfig(regime="grow-k", n_values=(1,), k_values=(64,),
                               target_points=1280)
        cell = run_grow_k(cfg).cells[0]
        assert cell.trials == 20
        assert cell.extras["annulus_mass_hw0.1"] >= 0.8
        assert cell.report.angular_ks <= 0.05

    def test_annulus_mass_grows_with_degree(self):
        cfg = ExperimentConfig(regime="grow-k", n_values=(2,),
                               k_values=(8, 64), target_points=1024)
        res = run_grow_k(cfg)
        masses = [c.extras["annulus_mass_hw0.1"] for c in res.cells]
        assert masses[0] < masses[1]


class TestPersistenceAndExport:
    def test_points_file_name_embeds_cell_and_seed(self, tmp_path):
        cfg = _small_cfg(output_dir=str(tmp_path))
        res = run_grow_n(cfg)
        assert res.cells[0].points_file == "points_grow-n_n8_k2_seed11.csv"
        assert (tmp_path / res.cells[0].points_file).exists()

    def test_persisted_points_round_trip_as_multiset(self, tmp_path):
        cfg = _small_cfg(output_dir=str(tmp_path))
        res = run_grow_n(cfg)
        back = read_points_csv(tmp_path / res.cells[0].points_file)
        assert back.size == 320

    def test_metrics_recomputable_from_persisted_points(self, tmp_path):
        cfg = _small_cfg(output_dir=str(tmp_path))
        res = run_grow_n(cfg)
        cell = res.cells[0]
        pts = read_points_csv(tmp_path / cell.points_file)
        esd = EmpiricalSpectralDistribution(points=pts, scale=8 ** -0.5,
                                            n=8, k=2, trials=cell.trials)
        again = distance_report(esd, DiscMixture(2),
                                atom_radius=cfg.atom_radius)
        assert again.radial_ks == pytest.approx(cell.report.radial_ks,
                                                abs=1e-12)
        assert again.angular_ks == pytest.approx(cell.report.angular_ks,
                                                 abs=1e-12)
        assert again.discrepancy == pytest.approx(cell.report.discrepancy,
                                                  abs=1e-12)

    def test_rerun_writes_identical_bytes(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            cfg = _small_cfg(output_dir=str(out))
            export_result(run_grow_n(cfg), out)
        name = "points_grow-n_n8_k2_seed11.csv"
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
        summary = "result_grow-n_seed11.json"
        assert (out_a / summary).read_bytes() == (out_b / summary).read_bytes()

    def test_worker_pool_matches_sequential_bytes(self, tmp_path):
        out_a, out_b = tmp_path / "seq", tmp_path / "pool"
        cfg = _small_cfg(output_dir=str(out_a), target_points=160)
        run_grow_n(cfg)
        cfg = _small_cfg(output_dir=str(out_b), target_points=160, workers=2)
        run_grow_n(cfg)
        name = "points_grow-n_n8_k2_seed11.csv"
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_export_json_summary_schema(self, tmp_path):
        cfg = _small_cfg()
        written = export_result(run_grow_n(cfg), tmp_path)
        assert [p.name for p in written] == ["result_grow-n_seed11.json"]
        doc = json.loads(written[0].read_text())
        assert doc["schema_version"] == SCHEMA_VERSION
        assert doc["regime"] == "grow-n"
        assert doc["seed"] == 11
        assert doc["config"] == cfg.to_json_dict()
        (cell,) = doc["cells"]
        assert cell["n"] == 8 and cell["k"] == 2 and cell["trials"] == 20
        assert set(cell["report"]) == {"radial_ks", "angular_ks",
                                       "discrepancy", "atom_mass_observed",
                                       "atom_radius"}
        assert set(cell["extras"]) == {"atom_mass_r0.1", "atom_mass_r0.2",
                                       "atom_mass_r0.3"}

    def test_export_svg_renders_each_persisted_cell(self, tmp_path):
        cfg = _small_cfg(output_dir=str(tmp_path), format="svg")
        res = run_grow_n(cfg)
        written = export_result(res, tmp_path, format="svg")
        names = sorted(p.name for p in written)
        assert names == ["result_grow-n_seed11.json",
                         "scatter_grow-n_n8_k2_seed11.svg"]
        svg = (tmp_path / "scatter_grow-n_n8_k2_seed11.svg").read_text()
        assert svg.count('class="pt"') == 320

    def test_export_svg_requires_persisted_points(self, tmp_path):
        res = run_grow_n(_small_cfg())  # no output_dir: nothing persisted
        with pytest.raises(ValidationError, match="persist"):
            export_result(res, tmp_path, format="svg")

    def test_export_rejects_unknown_format(self, tmp_path):
        res = run_grow_n(_small_cfg())
        with pytest.raises(ValidationError, match="format"):
            export_result(res, tmp_path, format="png")


@pytest.fixture(scope="module")
def small_run():
    cfg = ExperimentConfig(regime="grow-n", n_values=(8,), k_values=(2,),
                           target_points=320)
    return run_verification(cfg, suite_trials=5,
                            deterministic_instances=20, mc_trials=2000)


class TestRunVerification:
    #: All lemma/bound identifiers one full verification run must cover.
    EXPECTED_IDS = {
        "grow-n/sigma-min-companion-floor", "grow-n/sigma-min-lowrank-floor",
        "grow-n/spectral-norm-cap", "grow-n/tail-index-floor",
        "grow-k/top-sv-cap", "grow-k/block-sv-floor",
        "grow-k/sigma-min-floor", "grow-k/interlacing-chain",
        "lowrank-interlacing", "mirsky-sv-perturbation",
        "submatrix-interlacing", "woodbury-identity",
        "circulant-shift-sv-range", "pinv-tail-domination",
        "unit-vector-projection-beta", "gaussian-norm-tail",
    }

    def test_covers_every_lemma_id(self, small_run):
        ids = [r.lemma_id for r in small_run.reports]
        assert len(ids) == 17  # pinv-tail-domination appears for both R_D
        assert set(ids) == self.EXPECTED_IDS

    def test_small_run_passes(self, small_run):
        assert small_run.passed
        assert all(r.violations == 0 for r in small_run.reports)

    def test_jsonl_has_one_line_per_report(self, small_run):
        lines = small_run.to_jsonl().strip().split("\n")
        assert len(lines) == 17
        docs = [json.loads(line) for line in lines]
        assert {d["lemma_id"] for d in docs} == self.EXPECTED_IDS
        for d in docs:
            assert d["violations"] == 0

    def test_grow_n_shift_must_be_nonzero(self):
        cfg = ExperimentConfig(regime="grow-n", n_values=(8,), k_values=(2,),
                               target_points=320, z_values=(0j, 0.5 + 0j))
        with pytest.raises(ValidationError, match="nonzero shift"):
            run_verification(cfg, suite_trials=2, deterministic_instances=2,
                             mc_trials=10)

    def test_grow_k_shift_must_avoid_unit_circle(self):
        cfg = ExperimentConfig(regime="grow-n", n_values=(8,), k_values=(2,),
                               target_points=320,
                               z_values=(0.7 + 0.3j, 1.0 + 0j))
        with pytest.raises(ValidationError, match="0 and 1"):
            run_verification(cfg, suite_trials=2, deterministic_instances=2,
                             mc_trials=10)
