"""Plot-data tables and summary rendering for executed checks."""

from pathlib import Path

import pandas as pd
from pandera import Check, Column, DataFrameSchema
from rich.table import Table

from hmono.checks.cost.kernel import CostFunction
from hmono.checks.fluid.action import SandwichReport
from hmono.checks.green.identity import ConvergenceStudy
from hmono.checks.interpolation.density import DensitySnapshot
from hmono.checks.linfty.affine import AffineEstimateReport
from hmono.checks.linfty.bounds import EstimateReport, h_curve
from hmono.checks.linfty.models import BOUNDS_SCHEMA
from hmono.checks.linfty.probe import ProbeResult
from hmono.checks.monotone.check import MonotonicityReport
from hmono.checks.monotone.models import MONOTONICITY_SCHEMA
from hmono.utils.io import console, write_output
from hmono.utils.transforms import stack_frames, summary_frame
from hmono.utils.types import CheckOutcome, CheckStatus
from hmono.utils.validators import require_valid

SANDWICH_SCHEMA = DataFrameSchema(
    columns={
        "label": Column(str),
        "lower": Column(float, nullable=True),
        "action": Column(float, nullable=True),
        "upper": Column(float, nullable=True),
        "stderr": Column(float, nullable=True),
        "status": Column(str, Check.isin([str(s) for s in CheckStatus])),
    },
    strict=True,
    coerce=True,
)

CONVERGENCE_SCHEMA = DataFrameSchema(
    columns={
        "source": Column(str),
        "budget": Column(int, Check.ge(1)),
        "directions": Column(int, Check.ge(1)),
        "residual": Column(float, Check.ge(0.0)),
    },
    strict=True,
    coerce=True,
)


def _bound_row(report: EstimateReport | AffineEstimateReport, cost: CostFunction) -> dict:
    match report:
        case EstimateReport():
            estimate, delta = "two-branch", report.delta
        case AffineEstimateReport():
            estimate, delta = "affine", report.delta_prime
    return {
        "label": report.label,
        "estimate": estimate,
        "n": report.ball.n,
        "p": cost.p,
        "beta": report.beta,
        "radius": report.ball.radius,
        "delta": delta,
        "branch": str(report.branch),
        "bound": report.bound,
        "empirical_sup": report.empirical_sup,
        "passed": report.passed,
    }


def _monotonicity_row(report: MonotonicityReport, cost: CostFunction) -> dict:
    return {
        "label": report.label,
        "mode": str(report.mode),
        "n": cost.n,
        "p": cost.p,
        "pairs_checked": report.pairs_checked,
        "worst_defect": report.worst_defect,
        "worst_i": report.worst_pair[0],
        "worst_j": report.worst_pair[1],
        "passed": report.passed,
    }


def emit_plot_data(outcomes: list[CheckOutcome], cost: CostFunction, out_dir: Path | None = None) -> dict:
    """Collect the plot tables from every report artifact; write the nonempty ones as CSV under ``out_dir``."""
    bounds, curves, probes, densities, sandwiches, convergence, monotonicity = [], [], [], [], [], [], []

    for outcome in outcomes:
        for artifact in outcome.artifacts:
            match artifact:
                case EstimateReport():
                    bounds.append(_bound_row(artifact, cost))
                    table = h_curve(artifact.delta, artifact.ball.radius, artifact.beta, artifact.constants)
                    curves.append((artifact.label, table))
                case AffineEstimateReport():
                    bounds.append(_bound_row(artifact, cost))
                case ProbeResult():
                    probes.append((outcome.check, artifact.table))
                case DensitySnapshot():
                    densities.append((outcome.check, artifact.to_frame()))
                case SandwichReport():
                    row = {k: artifact.to_dict()[k] for k in ("lower", "action", "upper", "stderr", "status")}
                    sandwiches.append({"label": outcome.check} | row)
                case ConvergenceStudy():
                    convergence.append((artifact.label, artifact.table))
                case MonotonicityReport():
                    monotonicity.append(_monotonicity_row(artifact, cost))

    tables = {
        "bounds": require_valid(pd.DataFrame(bounds, columns=list(BOUNDS_SCHEMA.columns)), BOUNDS_SCHEMA, "bounds"),
        "h_curve": stack_frames(curves),
        "probe_ratio": stack_frames(probes),
        "density_profiles": stack_frames(densities),
        "sandwich": require_valid(
            pd.DataFrame(sandwiches, columns=list(SANDWICH_SCHEMA.columns)), SANDWICH_SCHEMA, "sandwich"
        ),
        "convergence": stack_frames(convergence),
        "monotonicity": require_valid(
            pd.DataFrame(monotonicity, columns=list(MONOTONICITY_SCHEMA.columns)), MONOTONICITY_SCHEMA, "monotonicity"
        ),
    }
    if not tables["convergence"].empty:
        tables["convergence"] = require_valid(tables["convergence"], CONVERGENCE_SCHEMA, "convergence")

    if out_dir is not None:
        for name, frame in tables.items():
            if not frame.empty:
                write_output(frame, Path(out_dir) / "plots" / f"{name}.csv")
    return tables


def summary_table(outcomes: list[CheckOutcome]) -> Table:
    glyphs = {
        "passed": "[green]✓[/green]",
        "failed": "[red]✗[/red]",
        "gated": "[yellow]○[/yellow]",
    }
    table = Table(title="Check Results")
    table.add_column("#")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Details")
    for row in summary_frame(outcomes).itertuples(index=False):
        table.add_row(str(row.index), row.check, glyphs[row.status], row.message or "OK")
    return table


def print_summary(outcomes: list[CheckOutcome]) -> None:
    console.print(summary_table(outcomes))
