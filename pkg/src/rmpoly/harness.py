"""Experiment orchestration: configs, convergence runs, verification runs.

Two experiment regimes mirror the two limit statements:

* ``grow-n``: degree k fixed, dimension n swept; eigenvalues scaled by
  ``n**-0.5`` and compared against ``DiscMixture(k)``;
* ``grow-k``: dimension n fixed, degree k swept; eigenvalues unscaled and
  compared against ``UnitCircle``.

Cells keep the pooled point count roughly constant: a cell at (n, k) runs
``ceil(target_points / (k n))`` trials.  Every trial draws from its own
addressable RNG stream keyed by (cell index, trial index), so results are
identical whether trials run sequentially or on a worker pool, and two runs
with the same config and seed produce byte-identical CSV/JSON outputs.
Progress and timing go to the ``rmpoly.harness`` logger (stderr in the
CLI), never into result files.
"""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .esd import (DiscMixture, EmpiricalSpectralDistribution, UnitCircle,
                  distance_report, merge)
from .matpoly import RngStream, finite_eigenvalues, sample_monic_gaussian
from .svgplot import svg_scatter
from .verify import (LemmaCheckConfig, beta_projection_check,
                     check_pinv_tail_domination, gaussian_norm_tail,
                     lemma_suite_grow_k, lemma_suite_grow_n,
                     sweep_circulant_shift_bounds, sweep_lowrank_interlacing,
                     sweep_mirsky, sweep_submatrix_interlacing,
                     sweep_woodbury_identity, LemmaReport)

__all__ = [
    "SCHEMA_VERSION",
    "ExperimentConfig",
    "CellResult",
    "ExperimentResult",
    "VerificationResult",
    "run_grow_n",
    "run_grow_k",
    "run_experiment",
    "run_verification",
    "export_result",
    "write_points_csv",
    "read_points_csv",
    "render_scatter",
]

SCHEMA_VERSION = 1

logger = logging.getLogger("rmpoly.harness")

_REGIMES = ("grow-n", "grow-k")
_FORMATS = ("csv", "json", "svg")

#: Atom-mass proxy radii reported alongside the headline radius.
ATOM_RADIUS_SWEEP = (0.1, 0.2, 0.3)

#: Half-width of the near-unit-circle annulus reported in grow-k cells.
ANNULUS_HALFWIDTH = 0.1


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment run.

    The swept axis must carry the multiple values: ``grow-n`` needs exactly
    one k and at least one n, ``grow-k`` the reverse.  ``z_values`` feeds
    the verification suites (first entry for the dimension-grown suite,
    second -- or the first again -- for the degree-grown one).
    """

    regime: str
    n_values: tuple
    k_values: tuple
    target_points: int = 20000
    seed: int = 7
    z_values: tuple = (0.7 + 0.3j, 0.5 + 0.0j)
    atom_radius: float = 0.2
    output_dir: str | None = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_values",
                           tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "k_values",
                           tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "z_values",
                           tuple(complex(z) for z in self.z_values))
        if self.regime not in _REGIMES:
            raise ValidationError(
                f"regime must be one of {_REGIMES}, got {self.regime!r}")
        if not self.n_values or not self.k_values:
            raise ValidationError("n_values and k_values must be nonempty")
        if any(v < 1 for v in self.n_values + self.k_values):
            raise ValidationError("all sizes must be >= 1")
        if self.regime == "grow-n" and len(self.k_values) != 1:
            raise ValidationError(
                "grow-n sweeps n at a single fixed k; pass exactly one k")
        if self.regime == "grow-k" and len(self.n_values) != 1:
            raise ValidationError(
                "grow-k sweeps k at a single fixed n; pass exactly one n")
        if self.target_points < 1:
            raise ValidationError("target_points must be >= 1")
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")
        if not self.z_values:
            raise ValidationError("z_values must be nonempty")
        if not 0.0 < self.atom_radius <= 1.0:
            raise ValidationError(
                f"atom_radius must lie in (0, 1], got {self.atom_radius}")
        if self.format not in _FORMATS:
            raise ValidationError(
                f"format must be one of {_FORMATS}, got {self.format!r}")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        for n, k in self.cells():
            if n * k > self.target_points:
                raise ValidationError(
                    f"infeasible cell (n={n}, k={k}): one trial already "
                    f"yields {n * k} points, more than target_points="
                    f"{self.target_points}")

    def cells(self) -> list:
        if self.regime == "grow-n":
            return [(n, self.k_values[0]) for n in self.n_values]
        return [(self.n_values[0], k) for k in self.k_values]

    def trials_for(self, n: int, k: int) -> int:
        return max(1, math.ceil(self.target_points / (k * n)))

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "regime": self.regime,
            "n_values": list(self.n_values),
            "k_values": list(self.k_values),
            "target_points": self.target_points,
            "seed": self.seed,
            "z_values": [[z.real, z.imag] for z in self.z_values],
            "atom_radius": self.atom_radius,
            "format": self.format,
            "workers": self.workers,
        }

    @classmethod
    def from_json_dict(cls, doc: dict, **overrides) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ValidationError("experiment config must be a JSON object")
        version = doc.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValidationError(
                f"unsupported config schema_version {version!r} "
                f"(this build reads {SCHEMA_VERSION})")
        known = {"regime", "n_values", "k_values", "target_points", "seed",
                 "z_values", "atom_radius", "output_dir", "format", "workers"}
        unknown = set(doc) - known - {"schema_version"}
        if unknown:
            raise ValidationError(
                f"unknown config fields: {sorted(unknown)}")
        kwargs = {k: doc[k] for k in known if k in doc}
        if "z_values" in kwargs:
            kwargs["z_values"] = tuple(
                complex(re, im) for re, im in kwargs["z_values"])
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        missing = {"regime", "n_values", "k_values"} - set(kwargs)
        if missing:
            raise ValidationError(f"config missing fields: {sorted(missing)}")
        return cls(**kwargs)


@dataclass(frozen=True)
class CellResult:
    """Outcome of one (n, k) cell.  ``wallclock`` is diagnostic only and is
    deliberately excluded from serialized output to keep reruns
    byte-identical."""

    n: int
    k: int
    trials: int
    report: object
    extras: dict
    points_file: str | None
    wallclock: float = field(compare=False)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "points_file": self.points_file,
            "report": self.report.to_json_dict(),
            "extras": dict(sorted(self.extras.items())),
        }


@dataclass(frozen=True)
class ExperimentResult:
    regime: str
    seed: int
    config: ExperimentConfig
    cells: tuple

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "regime": self.regime,
            "seed": self.seed,
            "config": self.config.to_json_dict(),
            "cells": [c.to_json_dict() for c in self.cells],
        }


# ---------------------------------------------------------------------------
# Points CSV I/O


def write_points_csv(points, path) -> None:
    """Write complex points as ``re,im`` CSV with full round-trip precision."""
    pts = np.asarray(points, dtype=np.complex128).ravel()
    lines = ["re,im"]
    lines.extend(f"{float(z.real)!r},{float(z.imag)!r}" for z in pts)
    Path(path).write_text("\n".join(lines) + "\n")


def read_points_csv(path) -> np.ndarray:
    """Read a ``re,im`` CSV back into a complex array.

    Parse failures report the file and 1-based line number.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read points file {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0].strip() != "re,im":
        raise ValidationError(
            f"{path}:1: expected header 're,im', got "
            f"{lines[0].strip() if lines else '<empty file>'!r}")
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValidationError(
                f"{path}:{lineno}: expected two comma-separated fields")
        try:
            values.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    if not values:
        raise ValidationError(f"{path}: no points found")
    return np.asarray(values, dtype=np.complex128)


def render_scatter(points_file, out_path, overlay_unit_circle: bool = True
                   ) -> None:
    """Render a persisted point cloud to SVG; empty input writes nothing."""
    points = read_points_csv(points_file)
    Path(out_path).write_text(svg_scatter(points, overlay_unit_circle))


# ---------------------------------------------------------------------------
# Experiment runs


def _trial_points(task) -> np.ndarray:
    n, k, scale, stream = task
    return scale * finite_eigenvalues(sample_monic_gaussian(n, k, stream))


def _run_cells(cfg: ExperimentConfig, rng: RngStream, scale_of, law_of,
               extras_of) -> ExperimentResult:
    out_dir = Path(cfg.output_dir) if cfg.output_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    cells = []
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for idx, (n, k) in enumerate(cfg.cells()):
            start = time.monotonic()
            trials = cfg.trials_for(n, k)
            scale = scale_of(n, k)
            tasks = [(n, k, scale, rng.child(idx, t)) for t in range(trials)]
            mapper = pool.map if pool is not None else map
            esds = [
                EmpiricalSpectralDistribution(points=pts, scale=scale,
                                              n=n, k=k, trials=1)
                for pts in mapper(_trial_points, tasks)
            ]
            esd = merge(esds)
            report = distance_report(esd, law_of(n, k),
                                     atom_radius=cfg.atom_radius)
            points_file = None
            if out_dir is not None:
                name = (f"points_{cfg.regime}_n{n}_k{k}_seed{cfg.seed}.csv")
                write_points_csv(esd.points, out_dir / name)
                points_file = name
            elapsed = time.monotonic() - start
            logger.info("cell %s n=%d k=%d trials=%d points=%d "
                        "wallclock=%.2fs", cfg.regime, n, k, trials,
                        esd.points.size, elapsed)
            cells.append(CellResult(n=n, k=k, trials=trials, report=report,
                                    extras=extras_of(esd), points_file=points_file,
                                    wallclock=elapsed))
    finally:
        if pool is not None:
            pool.shutdown()
    return ExperimentResult(regime=cfg.regime, seed=cfg.seed, config=cfg,
                            cells=tuple(cells))


def _atom_sweep(esd: EmpiricalSpectralDistribution) -> dict:
    radii = np.abs(esd.points)
    return {f"atom_mass_r{r}": float(np.mean(radii <= r))
            for r in ATOM_RADIUS_SWEEP}


def _annulus_extras(esd: EmpiricalSpectralDistribution) -> dict:
    band = np.abs(np.abs(esd.points) - 1.0) <= ANNULUS_HALFWIDTH
    return {f"annulus_mass_hw{ANNULUS_HALFWIDTH}": float(np.mean(band))}


def run_grow_n(cfg: ExperimentConfig, rng: RngStream | None = None
               ) -> ExperimentResult:
    """Sweep n at fixed k; eigenvalues scaled by ``n**-0.5`` and compared
    against the disc mixture with atom weight (k-1)/k."""
    if cfg.regime != "grow-n":
        raise ValidationError(f"config regime is {cfg.regime!r}, not 'grow-n'")
    rng = RngStream(cfg.seed) if rng is None else rng
    k = cfg.k_values[0]
    return _run_cells(cfg, rng,
                      scale_of=lambda n, _k: n ** -0.5,
                      law_of=lambda _n, _k: DiscMixture(k),
                      extras_of=_atom_sweep)


def run_grow_k(cfg: ExperimentConfig, rng: RngStream | None = None
               ) -> ExperimentResult:
    """Sweep k at fixed n; unscaled eigenvalues against the unit circle."""
    if cfg.regime != "grow-k":
        raise ValidationError(f"config regime is {cfg.regime!r}, not 'grow-k'")
    rng = RngStream(cfg.seed) if rng is None else rng
    return _run_cells(cfg, rng,
                      scale_of=lambda _n, _k: 1.0,
                      law_of=lambda _n, _k: UnitCircle(),
                      extras_of=_annulus_extras)


def run_experiment(cfg: ExperimentConfig, rng: RngStream | None = None
                   ) -> ExperimentResult:
    return (run_grow_n if cfg.regime == "grow-n" else run_grow_k)(cfg, rng)


def export_result(result: ExperimentResult, output_dir,
                  format: str = "json") -> list:
    """Write the result summary (and optional SVG renders); returns paths.

    ``json`` writes the summary document; ``csv`` assumes the per-cell point
    files were already persisted by the run and writes the summary next to
    them; ``svg`` additionally renders one scatter per persisted cell.
    """
    if format not in _FORMATS:
        raise ValidationError(f"format must be one of {_FORMATS}, got {format!r}")
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    summary = out_dir / f"result_{result.regime}_seed{result.seed}.json"
    summary.write_text(json.dumps(result.to_json_dict(), indent=2,
                                  sort_keys=True) + "\n")
    written.append(summary)
    if format == "svg":
        for cell in result.cells:
            if cell.points_file is None:
                raise ValidationError(
                    "cannot render SVG: run did not persist points "
                    "(set output_dir in the config)")
            name = (f"scatter_{result.regime}_n{cell.n}_k{cell.k}"
                    f"_seed{result.seed}.svg")
            render_scatter(out_dir / cell.points_file, out_dir / name,
                           overlay_unit_circle=True)
            written.append(out_dir / name)
    return written


# ---------------------------------------------------------------------------
# Verification runs


@dataclass(frozen=True)
class VerificationResult:
    """All lemma reports of one verification run.

    ``passed`` is True only when every report is violation-free; the CLI
    turns a failed run into exit code 3.
    """

    reports: tuple

    @property
    def passed(self) -> bool:
        return all(r.violations == 0 for r in self.reports)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json_dict(), sort_keys=True) + "\n"
                       for r in self.reports)


#: Default sweep layouts for ``run_verification`` (pilot-calibrated).
GROW_N_SIZES = ((16, 3), (32, 3), (64, 3))
GROW_K_SIZES = ((2, 8), (2, 32), (2, 128))
DETERMINISTIC_DIM = 8
CIRCULANT_SIZES = ((2, 8), (3, 5), (4, 16))


def run_verification(cfg: ExperimentConfig, rng: RngStream | None = None,
                     suite_trials: int = 200,
                     deterministic_instances: int = 1000,
                     mc_trials: int = 100000) -> VerificationResult:
    """Run both probabilistic lemma suites plus all deterministic sweeps.

    ``z_values[0]`` shifts the dimension-grown suite (needs z != 0),
    ``z_values[1]`` -- falling back to ``z_values[0]`` -- the degree-grown
    suite (needs |z| not in {0, 1}).
    """
    rng = RngStream(cfg.seed) if rng is None else rng
    z_n = cfg.z_values[0]
    z_k = cfg.z_values[1] if len(cfg.z_values) > 1 else cfg.z_values[0]

    reports: list[LemmaReport] = []
    t0 = time.monotonic()
    cfg_n = LemmaCheckConfig(z=z_n, sizes=GROW_N_SIZES, trials=suite_trials)
    reports.extend(lemma_suite_grow_n(cfg_n, rng.child(0)))
    cfg_k = LemmaCheckConfig(z=z_k, sizes=GROW_K_SIZES, trials=suite_trials)
    reports.extend(lemma_suite_grow_k(cfg_k, rng.child(1)))
    logger.info("lemma suites done in %.2fs", time.monotonic() - t0)

    t0 = time.monotonic()
    det = rng.child(2)
    reports.append(sweep_lowrank_interlacing(DETERMINISTIC_DIM,
                                             deterministic_instances, det))
    reports.append(sweep_mirsky(DETERMINISTIC_DIM,
                                         deterministic_instances, det))
    reports.append(sweep_submatrix_interlacing(DETERMINISTIC_DIM,
                                               deterministic_instances, det))
    reports.append(sweep_woodbury_identity(DETERMINISTIC_DIM,
                                           deterministic_instances, det))
    reports.append(sweep_circulant_shift_bounds(CIRCULANT_SIZES,
                                                deterministic_instances, det))
    logger.info("deterministic sweeps done in %.2fs", time.monotonic() - t0)

    t0 = time.monotonic()
    tail = rng.child(3)
    reports.append(check_pinv_tail_domination(
        2, 6, 0.1, None, mc_trials, tail.child(0)))
    r_d = np.zeros((2, 6), dtype=np.complex128)
    r_d[0, 0] = 5.0  # spectral norm exactly 5
    reports.append(check_pinv_tail_domination(
        2, 6, 0.1, r_d, mc_trials, tail.child(1)))
    reports.append(beta_projection_check(6, 10000, tail.child(2)))
    freq = gaussian_norm_tail(32, 3.0, 1000, tail.child(3))
    # At threshold 3 sqrt(n) the norm tail is exponentially small; allow
    # three Poisson sigmas around zero events.
    reports.append(LemmaReport("gaussian-norm-tail", (3.0 / 1000 - freq,)))
    logger.info("tail-bound checks done in %.2fs", time.monotonic() - t0)

    return VerificationResult(reports=tuple(reports))
