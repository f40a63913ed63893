"""Command-line interface.

Exit codes: 0 success, 1 validation/config error, 2 numerical failure,
3 verification run with violations.  Machine-readable output goes to files
or stdout; progress and timing lines go to stderr.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from .errors import NumericalError, ValidationError
from .harness import (ExperimentConfig, export_result, read_points_csv,
                      render_scatter, run_experiment, run_verification,
                      write_points_csv)
from .matpoly import (RngStream, finite_eigenvalues, polynomial_to_json,
                      sample_monic_gaussian)
from .svgplot import svg_scatter
from .verify import LemmaCheckConfig  # noqa: F401  (re-exported for configs)


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except (NumericalError, np.linalg.LinAlgError) as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(2)
    return wrapper


def _parse_z(_ctx, _param, values):
    out = []
    for v in values:
        parts = v.split(",")
        try:
            if len(parts) == 1:
                out.append(complex(float(parts[0]), 0.0))
            elif len(parts) == 2:
                out.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError("too many fields")
        except ValueError:
            raise click.BadParameter(
                f"expected 're' or 're,im', got {v!r}") from None
    return tuple(out)


@click.group()
@click.option("--quiet", is_flag=True, help="Suppress progress output.")
def main(quiet):
    """Spectra of random Gaussian monic matrix polynomials.

    Sample polynomials, pool their scaled eigenvalues, measure distances to
    the limiting laws, and verify the singular-value bounds behind them.
    """
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root = logging.getLogger("rmpoly")
    root.handlers.clear()  # idempotent under repeated invocation
    root.addHandler(handler)
    root.setLevel(logging.WARNING if quiet else logging.INFO)


@main.command()
@click.option("--n", type=int, required=True, help="Coefficient dimension.")
@click.option("--k", type=int, required=True, help="Polynomial degree.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output JSON path (default: stdout).")
@_guard
def sample(n, k, seed, out):
    """Sample one monic Gaussian polynomial and emit it as JSON."""
    p = sample_monic_gaussian(n, k, RngStream(seed))
    text = polynomial_to_json(p)
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


@main.command()
@click.option("--n", type=int, required=True, help="Coefficient dimension.")
@click.option("--k", type=int, required=True, help="Polynomial degree.")
@click.option("--trials", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--regime", type=click.Choice(["grow-n", "grow-k"]),
              default="grow-n", show_default=True,
              help="Chooses the eigenvalue scaling: n**-0.5 or 1.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output CSV path (default: stdout).")
@_guard
def esd(n, k, trials, seed, regime, out):
    """Pool scaled eigenvalues over trials and emit them as re,im CSV."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    scale = n ** -0.5 if regime == "grow-n" else 1.0
    rng = RngStream(seed)
    points = []
    for t in range(trials):
        p = sample_monic_gaussian(n, k, rng.child(0, t))
        points.append(scale * finite_eigenvalues(p))
    pts = np.concatenate(points)
    if out is None:
        click.echo("re,im")
        for z in pts:
            click.echo(f"{float(z.real)!r},{float(z.imag)!r}")
    else:
        write_points_csv(pts, out)


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              default=None, help="JSON experiment config; flags override it.")
@click.option("--regime", type=click.Choice(["grow-n", "grow-k"]),
              default=None)
@click.option("--n", "n_values", type=int, multiple=True,
              help="Dimension value (repeatable).")
@click.option("--k", "k_values", type=int, multiple=True,
              help="Degree value (repeatable).")
@click.option("--target-points", type=int, default=None,
              help="Pooled points per cell (sets the trial count).")
@click.option("--seed", type=int, default=None)
@click.option("--z", "z_values", multiple=True, callback=_parse_z,
              help="Shift as 're,im' (repeatable; used by verification).")
@click.option("--atom-radius", type=float, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--out", "output_dir", type=click.Path(file_okay=False),
              required=True, help="Output directory.")
@click.option("--format", "format_", type=click.Choice(["csv", "json", "svg"]),
              default=None)
@_guard
def experiment(config_path, regime, n_values, k_values, target_points, seed,
               z_values, atom_radius, workers, output_dir, format_):
    """Run a convergence experiment and persist points plus a summary."""
    doc = {}
    if config_path is not None:
        try:
            doc = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot load config {config_path}: {exc}")
    cfg = ExperimentConfig.from_json_dict(doc, regime=regime,
                                          n_values=n_values or None,
                                          k_values=k_values or None,
                                          target_points=target_points,
                                          seed=seed,
                                          z_values=z_values or None,
                                          atom_radius=atom_radius,
                                          workers=workers,
                                          output_dir=output_dir,
                                          format=format_)
    result = run_experiment(cfg)
    written = export_result(result, output_dir, cfg.format)
    for path in written:
        click.echo(str(path))


@main.command()
@click.option("--z", "z_values", multiple=True, callback=_parse_z,
              help="Shift as 're,im' (repeatable; first feeds the "
                   "dimension-grown suite, second the degree-grown one).")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--trials", type=int, default=200, show_default=True,
              help="Trials per size in each probabilistic suite.")
@click.option("--instances", type=int, default=1000, show_default=True,
              help="Instances per deterministic sweep.")
@click.option("--mc-trials", type=int, default=100000, show_default=True,
              help="Monte Carlo draws for the tail-bound checks.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write JSON-lines reports here (default: stdout).")
@_guard
def verify(z_values, seed, trials, instances, mc_trials, out):
    """Run every bound check; exit 3 if any check records a violation."""
    zs = z_values or (0.7 + 0.3j, 0.5 + 0.0j)
    cfg = ExperimentConfig(regime="grow-n", n_values=(16, 32, 64),
                           k_values=(3,), seed=seed, z_values=zs)
    result = run_verification(cfg, suite_trials=trials,
                              deterministic_instances=instances,
                              mc_trials=mc_trials)
    text = result.to_jsonl()
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)
    for r in result.reports:
        status = "ok" if r.violations == 0 else f"{r.violations} VIOLATIONS"
        click.echo(f"{r.lemma_id}: {status}", err=True)
    if not result.passed:
        click.echo("verification FAILED", err=True)
        sys.exit(3)
    click.echo("verification passed", err=True)


@main.command()
@click.argument("points_file", type=click.Path(dir_okay=False, exists=True))
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output SVG path.")
@click.option("--unit-circle/--no-unit-circle", default=True,
              show_default=True, help="Overlay the unit circle.")
@_guard
def plot(points_file, out, unit_circle):
    """Render a persisted re,im point cloud as an SVG scatter."""
    render_scatter(points_file, out, overlay_unit_circle=unit_circle)
    click.echo(out)


if __name__ == "__main__":
    main()
