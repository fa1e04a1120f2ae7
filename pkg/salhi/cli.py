"""
Command-line interface for SALHI
Parses a run configuration and dispatches to the analytic, moments and optimizer layers
"""

import logging
import os
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional, Tuple

import click

from salhi import __version__, config
from salhi.core import analytic
from salhi.core.analytic import DetectionScheme
from salhi.core.errors import ConfigFileError, ConfigValidationError, SalhiError
from salhi.core.model import Flag, InterferometerConfig, SeedKind
from salhi.core.moments import snr_numeric
from salhi.parsers import load_run_config
from salhi.parsers.run_config import OUTPUT_FORMATS, RunConfig
from salhi.services.figures import FigureName, build_figure, write_figure
from salhi.services.optimizer import Objective, SweepRow, optimize_g2, run_sweep
from salhi.services.verification import DEFAULT_GRID_SIZE, Fault, run_verification
from salhi.utils.output import atomic_write, write_csv, write_json
from salhi.utils.svg import PlotPanel, render_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _formats(value: Optional[str]) -> Optional[Tuple[str, ...]]:
    if value is None:
        return None
    formats = tuple(f.strip() for f in value.split(",") if f.strip())
    unknown = [f for f in formats if f not in OUTPUT_FORMATS]
    if unknown:
        raise click.BadParameter(f"unknown format(s) {', '.join(unknown)}; choose from {', '.join(OUTPUT_FORMATS)}")
    return formats


def _load(ctx: click.Context) -> RunConfig:
    """Run config from --config, exiting with status 2 and the diagnostics on failure"""
    try:
        return load_run_config(ctx.obj["config"])
    except (ConfigFileError, ConfigValidationError) as e:
        click.echo(f"Error: invalid config: {e}", err=True)
        ctx.exit(EXIT_USAGE)


def _out_dir(ctx: click.Context, run: RunConfig) -> str:
    return ctx.obj["out"] or run.output_dir


def _emit_json(ctx: click.Context, run: RunConfig, name: str, payload: Dict[str, Any]) -> None:
    formats = ctx.obj["formats"] or ()
    if "json" in formats:
        write_json(os.path.join(_out_dir(ctx, run), f"{name}.json"), payload)


def _table(rows: List[Tuple[str, str]]) -> None:
    width = max(len(label) for label, _ in rows)
    for label, value in rows:
        click.echo(f"{label.ljust(width)}  {value}")


@click.group()
@click.version_option(__version__, prog_name="salhi")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="JSON run configuration")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory (overrides the config)")
@click.option("--format", "formats", default=None, help="Comma-separated output formats: csv,json,svg")
@click.option("--grid-size", type=click.IntRange(min=2), default=None, help="Grid size for sweeps and verification")
@click.option("--seed", type=int, default=None, help="Random seed for verification grids")
@click.pass_context
def cli(ctx: click.Context, config_path, out, formats, grid_size, seed):
    """Model, optimize and verify the SU(1,1) atom-light hybrid interferometer"""
    ctx.ensure_object(dict)
    ctx.obj.update(config=config_path, out=out, formats=_formats(formats), grid_size=grid_size, seed=seed)


@cli.command()
@click.pass_context
def visibility(ctx: click.Context):
    """Print SU(1,1) visibility for both seeds, MZ visibility and condition residuals"""
    run = _load(ctx)
    cfg = run.interferometer
    atomic = cfg.with_seed(kind=SeedKind.ATOMIC)
    payload = {
        "visibility_su_optical_seed": analytic.visibility_su(cfg.with_seed(kind=SeedKind.OPTICAL)).value,
        "visibility_su_atomic_seed": analytic.visibility_su(atomic).value,
        "visibility_mz": analytic.visibility_mz(cfg.losses).value,
        "condition_residual_id_optical": analytic.condition_residual(cfg.with_seed(kind=SeedKind.OPTICAL), DetectionScheme.ID),
        "condition_residual_id_atomic": analytic.condition_residual(atomic, DetectionScheme.ID),
        "condition_residual_bhd": analytic.condition_residual(cfg, DetectionScheme.BHD),
    }
    _table([(key, f"{value:.6g}") for key, value in payload.items()])
    _emit_json(ctx, run, "visibility", payload)


@cli.command()
@click.pass_context
def snr(ctx: click.Context):
    """Print SNR under intensity and homodyne detection from both engines, and the MZ SNR"""
    run = _load(ctx)
    cfg = run.interferometer
    payload = {}
    for scheme in DetectionScheme:
        payload[f"snr_su_{scheme.value}_analytic"] = analytic.snr_su(cfg, scheme).value
        payload[f"snr_su_{scheme.value}_moments"] = snr_numeric(cfg, scheme).value
    payload["snr_mz"] = analytic.snr_mz(cfg.losses, cfg.stage1, cfg.probe, cfg.seed.mean_photon_number).value
    _table([(key, f"{value:.6g}") for key, value in payload.items()])
    _emit_json(ctx, run, "snr", payload)


def _optimum_row(cfg: InterferometerConfig, objective: Objective, scheme: DetectionScheme, bounds) -> Dict[str, Any]:
    best = optimize_g2(cfg, objective, scheme, bounds)
    tuned = cfg.with_stage2(best.gain)
    return {
        "objective": objective.value,
        "scheme": scheme.value,
        "G2": best.gain.G,
        "visibility": analytic.visibility_su(tuned).value,
        "snr": analytic.snr_su(tuned, scheme).value,
        "exact": best.exact,
        "flat_objective": Flag.FLAT_OBJECTIVE in best.flags,
    }


@cli.command()
@click.pass_context
def optimize(ctx: click.Context):
    """Optimize G2 for visibility and for SNR under both detection schemes"""
    run = _load(ctx)
    cfg = run.interferometer
    rows = [
        _optimum_row(cfg, Objective.VISIBILITY, DetectionScheme.ID, run.bounds),
        _optimum_row(cfg, Objective.SNR, DetectionScheme.ID, run.bounds),
        _optimum_row(cfg, Objective.SNR, DetectionScheme.BHD, run.bounds),
    ]
    bhd_condition = analytic.solve_g2(cfg.stage1, cfg.losses, DetectionScheme.BHD, cfg.seed.kind, run.bounds)

    click.echo(f"{'objective':<12}{'scheme':<8}{'G2*':>14}{'V':>14}{'SNR':>14}  exact")
    for row in rows:
        click.echo(
            f"{row['objective']:<12}{row['scheme']:<8}{row['G2']:>14.6g}{row['visibility']:>14.6g}"
            f"{row['snr']:>14.6g}  {str(row['exact']).lower()}"
        )
    click.echo(f"BHD condition G2 = {bhd_condition.gain.G:.6g} (exact={str(bhd_condition.exact).lower()})")

    id_gap = abs(rows[0]["G2"] - rows[1]["G2"])
    bhd_gap = abs(rows[1]["G2"] - rows[2]["G2"])
    click.echo(f"visibility- and ID SNR-optimal G2 {'coincide' if id_gap <= 1e-3 else 'differ'} (|dG2| = {id_gap:.3g})")
    click.echo(f"ID- and BHD-optimal G2 {'coincide' if bhd_gap <= 1e-3 else 'differ'} (|dG2| = {bhd_gap:.3g})")
    _emit_json(ctx, run, "optimize", {
        "optima": rows,
        "bhd_condition": {"G2": bhd_condition.gain.G, "exact": bhd_condition.exact},
        "id_gap": id_gap,
        "bhd_gap": bhd_gap,
    })


@cli.command()
@click.pass_context
def sweep(ctx: click.Context):
    """Run the config's sweep block and write sweep.csv/json/svg"""
    run = _load(ctx)
    spec = run.sweep_spec(ctx.obj["grid_size"])
    try:
        result = run_sweep(spec, progress=True)
    except ConfigValidationError as e:
        click.echo(f"Error: invalid sweep: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    out_dir, formats = _out_dir(ctx, run), ctx.obj["formats"] or run.formats
    stem = os.path.join(out_dir, "sweep")
    rows = [row.values() for row in result.rows]
    if "csv" in formats:
        write_csv(f"{stem}.csv", SweepRow.columns(), rows)
    if "json" in formats:
        write_json(f"{stem}.json", {"swept": spec.swept.value, "rows": [dict(zip(SweepRow.columns(), r)) for r in rows]})
    if "svg" in formats:
        x = result.column("swept_value")
        panels = [
            PlotPanel("Visibility", spec.swept.value, "V").add("V_SU", x, result.column("visibility_su"))
            .add("V_MZ", x, result.column("visibility_mz"), dashed=True),
            PlotPanel("SNR", spec.swept.value, "SNR").add("SNR_SU", x, result.column("snr_su"))
            .add("SNR_MZ", x, result.column("snr_mz"), dashed=True),
        ]
        atomic_write(f"{stem}.svg", render_svg(panels, columns=2))
    failed = sum(1 for row in result.rows if row.error)
    click.echo(f"Swept {spec.swept.value} over {len(result.rows)} points ({failed} failed) into {out_dir}")


@cli.command()
@click.argument("name", type=click.Choice([f.value for f in FigureName]))
@click.pass_context
def figure(ctx: click.Context, name: str):
    """Write a figure preset as <name>.csv, <name>.json and <name>.svg"""
    run = _load(ctx)
    if ctx.obj["grid_size"] is not None:
        run = replace(run, figure=replace(run.figure, points=ctx.obj["grid_size"]))
    data = build_figure(FigureName(name), run, progress=True)
    written = write_figure(data, _out_dir(ctx, run), ctx.obj["formats"] or run.formats)
    for path in written:
        click.echo(path)


@cli.command()
@click.option("--inject-fault", type=click.Choice([f.value for f in Fault]), default=None, hidden=True)
@click.pass_context
def verify(ctx: click.Context, inject_fault: Optional[str]):
    """Run the self-verification suite; exit status 1 if any check fails"""
    seed = ctx.obj["seed"]
    if seed is None:
        seed = _load(ctx).random_seed if ctx.obj["config"] else config.RANDOM_SEED
    report = run_verification(
        grid_size=ctx.obj["grid_size"] or DEFAULT_GRID_SIZE,
        seed=seed,
        fault=Fault(inject_fault) if inject_fault else None,
        progress=True,
    )
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        click.echo(
            f"{status}  {check.name:<40} residual={check.residual:.3g}  tol={check.tolerance:.3g}  "
            f"{check.seconds:.2f}s  {check.detail}"
        )
    if not report.passed:
        names = ", ".join(check.name for check in report.failed)
        click.echo(f"Verification failed: {names}", err=True)
        ctx.exit(EXIT_VERIFY_FAILED)
    click.echo(f"All {len(report.checks)} checks passed")


def main():
    """Main function to run the CLI"""
    logging.basicConfig(level=config.LOG_LEVEL, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    try:
        cli(obj={})
    except SalhiError as e:
        logger.error(str(e))
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
