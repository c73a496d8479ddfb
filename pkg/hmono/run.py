"""Command-line entry point and experiment orchestrator."""

import logging
import sys
from pathlib import Path

import click
import numpy as np
from rich.logging import RichHandler
from rich.table import Table

from hmono.checks import fluid, green, interpolation, linfty, monotone
from hmono.checks.cost.kernel import CostFunction, build_cost
from hmono.checks.transport import ZOO, analytic_zoo, assignment_map, random_instance, read_map_csv, solve_exact
from hmono.config import (
    AssignmentSource,
    CertifyParams,
    CheckParams,
    CostSpec,
    CsvSource,
    ExperimentConfig,
    FluidParams,
    GreenParams,
    InterpParams,
    Lemma51Params,
    ZooSource,
    load_experiment,
    load_settings,
)
from hmono.errors import ConfigError, DimensionMismatchError, HmonoError
from hmono.report import emit_plot_data, print_summary
from hmono.utils.io import console, write_json
from hmono.utils.maps import DiscreteMap
from hmono.utils.transforms import summary_frame
from hmono.utils.types import CheckOutcome, CheckStatus, RunContext

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2

CHECKS = {
    "check": (monotone.run, monotone.ANCHOR),
    "certify": (linfty.run, linfty.CERTIFY_ANCHOR),
    "lemma51": (linfty.run_lemma51, linfty.LEMMA51_ANCHOR),
    "interp": (interpolation.run, interpolation.ANCHOR),
    "fluid": (fluid.run, fluid.ANCHOR),
    "green-check": (green.run, green.ANCHOR),
}


def build_map(source, cost: CostFunction, seed: int) -> DiscreteMap:
    match source:
        case ZooSource(name=name, params=params, points=points):
            dmap = analytic_zoo(name, cost.n, params, count=points, seed=seed)
        case CsvSource(path=path):
            dmap = read_map_csv(path)
        case AssignmentSource(points=points, spread=spread, seed=instance_seed):
            x, y = random_instance(cost.n, points, instance_seed, spread)
            dmap = assignment_map(x, y, solve_exact(x, y, cost), label=f"assignment[{points}]")
        case other:
            raise ConfigError(f"Unsupported map source: {other!r}")
    if dmap.n != cost.n:
        raise DimensionMismatchError(cost.n, dmap.n, what="map")
    return dmap


def execute(params, ctx: RunContext) -> CheckOutcome:
    """Run one check; exceptions become a failed outcome carrying the message."""
    handler, anchor = CHECKS[params.kind]
    try:
        return handler(params, ctx)
    except (HmonoError, ValueError, ArithmeticError) as e:
        logger.error("Check '%s' raised %s: %s", params.kind, type(e).__name__, e)
        return CheckOutcome(
            check=params.kind,
            status=CheckStatus.FAILED,
            anchor=anchor,
            payload={"error": type(e).__name__},
            message=str(e),
        )


def run(config: ExperimentConfig) -> tuple[int, list[CheckOutcome]]:
    """Execute the configured checks in order and write one report per check plus a summary."""
    settings = load_settings(config.profile)
    seed = settings.seed if config.seed is None else config.seed
    cost = build_cost(config.cost.n, config.cost.p, config.cost.family, config.cost.weights)
    dmap = build_map(config.map, cost, seed)
    ctx = RunContext(cost=cost, dmap=dmap, settings=settings, seed=seed)

    console.print(f"[bold]Running {len(config.checks)} check(s) on map '{dmap.label}'[/bold]")
    outcomes = []
    for index, params in enumerate(config.checks):
        console.print(f"[cyan]{'=' * 60}[/cyan]")
        console.print(f"[bold cyan]Check {index}: {params.kind}[/bold cyan]")
        outcome = execute(params, ctx)
        write_json(outcome.to_dict(), config.output / f"{index:02d}-{params.kind}.json")
        outcomes.append(outcome)

    summary = {
        "map": dmap.label,
        "cost": cost.to_dict(),
        "seed": seed,
        "profile": config.profile,
        "checks": summary_frame(outcomes).to_dict(orient="records"),
    }
    write_json(summary, config.output / "summary.json")
    emit_plot_data(outcomes, cost, config.output)
    print_summary(outcomes)

    failed = any(o.status == CheckStatus.FAILED for o in outcomes)
    return (EXIT_FAILED if failed else EXIT_OK), outcomes


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=console, show_time=False)],
        force=True,
    )


def _parse_vector(raw: str | None) -> list[float] | None:
    if raw is None:
        return None
    return [float(v) for v in raw.split(",")]


def _parse_matrix(raw: str | None) -> list[list[float]] | None:
    """Rows separated by ';', entries by ','."""
    if raw is None:
        return None
    return [_parse_vector(row) for row in raw.split(";")]


def _single(check, cost_path: Path, map_path: Path | None, zoo: str | None, out: Path | None, profile: str) -> None:
    """Run one check outside an experiment document and exit with the run's code."""
    try:
        spec = CostSpec.parse_file(cost_path)
        match (map_path, zoo):
            case (None, None):
                raise ConfigError("either --map or --zoo is required")
            case (None, name):
                source = ZooSource(kind="zoo", name=name)
            case (path, _):
                source = CsvSource(kind="csv", path=path)
        config = ExperimentConfig(cost=spec, map=source, checks=[check], profile=profile)
        settings = load_settings(profile)
        cost = build_cost(spec.n, spec.p, spec.family, spec.weights)
        ctx = RunContext(cost, build_map(config.map, cost, settings.seed), settings, settings.seed)
    except (HmonoError, ValueError, OSError) as e:
        console.print(f"[red]Configuration error: {e}[/red]")
        sys.exit(EXIT_CONFIG)

    outcome = execute(check, ctx)
    if out is not None:
        write_json(outcome.to_dict(), out)
    else:
        console.print_json(data=outcome.to_dict())
    print_summary([outcome])
    sys.exit(EXIT_FAILED if outcome.status == CheckStatus.FAILED else EXIT_OK)


def _common(command):
    command = click.option("--profile", default="default", type=click.Choice(["default", "fast", "thorough"]))(command)
    command = click.option("--out", type=click.Path(path_type=Path), help="Write the JSON report here.")(command)
    command = click.option("--zoo", help="Analytic zoo map name, instead of --map.")(command)
    command = click.option("--map", "map_path", type=click.Path(exists=True, path_type=Path))(command)
    command = click.option("--cost", "cost_path", required=True, type=click.Path(exists=True, path_type=Path))(command)
    return command


@click.group()
@click.option("--log-level", default="WARNING", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]))
def cli(log_level: str) -> None:
    """Certification toolkit for h-monotone transport maps."""
    _configure_logging(log_level)


@cli.command("run")
@click.argument("config_path", type=click.Path(path_type=Path))
def run_command(config_path: Path) -> None:
    """Run every check of an experiment document."""
    try:
        config = load_experiment(config_path)
    except ConfigError as e:
        console.print(f"[red]{e}[/red]")
        sys.exit(EXIT_CONFIG)
    try:
        code, _ = run(config)
    except (HmonoError, ValueError, OSError) as e:
        console.print(f"[red]Run aborted: {e}[/red]")
        sys.exit(EXIT_CONFIG)
    sys.exit(code)


@cli.command("check")
@_common
@click.option("--mode", default="h", type=click.Choice(["h", "bilinear", "classical"]))
@click.option("--matrix", help="Rows separated by ';', entries by ','.")
@click.option("--tolerance", type=float)
def check_command(cost_path, map_path, zoo, out, profile, mode, matrix, tolerance):
    """Pairwise monotonicity of a map."""
    params = CheckParams(kind="check", mode=mode, matrix=_parse_matrix(matrix), tolerance=tolerance)
    _single(params, cost_path, map_path, zoo, out, profile)


@cli.command("certify")
@_common
@click.option("--center", help="Comma-separated ball centre.")
@click.option("--radius", default=1.0, type=float)
@click.option("--beta", default=0.5, type=float)
@click.option("--budget", type=int)
def certify_command(cost_path, map_path, zoo, out, profile, center, radius, beta, budget):
    """Local sup bound of |Tx - x| against its empirical value."""
    params = CertifyParams(kind="certify", center=_parse_vector(center), radius=radius, beta=beta, budget=budget)
    _single(params, cost_path, map_path, zoo, out, profile)


@cli.command("lemma51")
@_common
@click.option("--matrix", help="Rows separated by ';', entries by ','.")
@click.option("--offset", help="Comma-separated affine offset b.")
@click.option("--center", help="Comma-separated ball centre.")
@click.option("--radius", default=1.0, type=float)
@click.option("--beta", default=0.5, type=float)
@click.option("--budget", type=int)
def lemma51_command(cost_path, map_path, zoo, out, profile, matrix, offset, center, radius, beta, budget):
    """Sup bound of Tx - Ax - b for a classically monotone map."""
    params = Lemma51Params(
        kind="lemma51",
        matrix=_parse_matrix(matrix),
        offset=_parse_vector(offset),
        center=_parse_vector(center),
        radius=radius,
        beta=beta,
        budget=budget,
    )
    _single(params, cost_path, map_path, zoo, out, profile)


@cli.command("interp")
@_common
@click.option("--beta", default=0.5, type=float)
@click.option("--beta-bar", default=0.75, type=float)
@click.option("--particles", type=int)
@click.option("--energy-threshold", type=float)
def interp_command(cost_path, map_path, zoo, out, profile, beta, beta_bar, particles, energy_threshold):
    """Inclusion, determinant and density checks along the interpolation."""
    params = InterpParams(
        kind="interp",
        beta=beta,
        beta_bar=beta_bar,
        particles=particles,
        energy_threshold=energy_threshold,
    )
    _single(params, cost_path, map_path, zoo, out, profile)


@cli.command("fluid")
@_common
@click.option("--beta-inner", default=0.4, type=float)
@click.option("--beta", default=0.5, type=float)
@click.option("--beta-outer", default=0.6, type=float)
@click.option("--t-samples", default=8, type=int)
def fluid_command(cost_path, map_path, zoo, out, profile, beta_inner, beta, beta_outer, t_samples):
    """Action sandwich of the interpolation flow."""
    params = FluidParams(kind="fluid", beta_inner=beta_inner, beta=beta, beta_outer=beta_outer, t_samples=t_samples)
    _single(params, cost_path, map_path, zoo, out, profile)


@cli.command("green-check")
@_common
@click.option("--n", "dim", default=3, type=int)
@click.option("--function", default="quadratic", type=click.Choice(["quadratic", "harmonic", "gaussian"]))
@click.option("--radius", default=1.0, type=float)
@click.option("--probe-delta", type=float)
def green_command(cost_path, map_path, zoo, out, profile, dim, function, radius, probe_delta):
    """Green representation identity residuals and their convergence."""
    params = GreenParams(kind="green-check", n=dim, function=function, radius=radius, probe_delta=probe_delta)
    _single(params, cost_path, map_path, zoo, out, profile)


@cli.group("zoo")
def zoo_group() -> None:
    """Analytic test maps."""


@zoo_group.command("list")
def zoo_list() -> None:
    table = Table(title="Analytic Map Zoo")
    table.add_column("Name")
    table.add_column("Monotone")
    table.add_column("Description")
    for name, entry in ZOO.items():
        mark = "[green]✓[/green]" if entry.monotone else "[red]✗[/red]"
        suffix = " (n = 1 only)" if entry.one_dimensional else ""
        table.add_row(name, mark, entry.description + suffix)
    console.print(table)


def main():
    np.seterr(all="ignore")
    cli()


if __name__ == "__main__":
    main()
