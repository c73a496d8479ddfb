"""Monotonicity suite: h-form, bilinear-form and affine-offset classical defects."""

from hmono.checks.cost.quadrature import QuadratureSpec
from hmono.checks.monotone.check import DefectMode, MonotonicityReport, check_map, select_pairs
from hmono.checks.monotone.defects import bilinear_defect, bilinear_defect_batch, classical_defect, h_defect
from hmono.checks.monotone.psd import psd_probe
from hmono.utils.types import CheckOutcome, RunContext, classify_status

ANCHOR = "h-monotone pair inequality / bilinear A-form / affine-offset monotonicity"


def run(params, ctx: RunContext) -> CheckOutcome:
    """Certify the run's map in the configured defect form."""
    settings = ctx.settings
    report = check_map(
        ctx.dmap,
        ctx.cost,
        mode=params.mode,
        tolerance=params.tolerance,
        matrix=params.matrix,
        quad=QuadratureSpec.from_settings(settings),
        threshold=settings.sampling.pair_threshold,
        samples=settings.sampling.pair_samples,
        seed=ctx.seed,
        threads=settings.threads,
    )
    message = "" if report.passed else f"worst pair {report.worst_pair} defect {report.worst_defect:.6e}"
    return CheckOutcome(
        check="check",
        status=classify_status(report.passed),
        anchor=ANCHOR,
        payload=report.to_dict() | {"cost": ctx.cost.to_dict()},
        message=message,
        artifacts=(report,),
    )
