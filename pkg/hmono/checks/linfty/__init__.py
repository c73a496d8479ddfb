"""Local sup estimates: the two-branch bound, its hypothesis probes and the affine-offset variant."""

import numpy as np

from hmono.checks.linfty.affine import AffineBranch, AffineEstimateReport, affine_minimum, f_function, lemma51_bound
from hmono.checks.linfty.bounds import (
    Branch,
    BoundResult,
    EstimateReport,
    InverseMapReport,
    branch_threshold,
    certify,
    h_curve,
    h_function,
    inverse_map_bound,
    min_H_closed_form,
    minimiser,
    statement_threshold,
    thm21_bound,
)
from hmono.checks.linfty.constants import EstimateConstants, estimate_constants
from hmono.checks.linfty.mass import Ball, MassEstimate, displacement_integral, empirical_sup, lp_mass
from hmono.checks.linfty.probe import LipschitzDiagnostic, ProbeResult, lipschitz_diagnostic, probe_lower_bound
from hmono.checks.monotone.check import DefectMode, check_map
from hmono.utils.types import CheckOutcome, RunContext, classify_status

CERTIFY_ANCHOR = "two-branch local sup bound of |Tx - x| from the p-mass on B_R"
LEMMA51_ANCHOR = "affine-offset sup bound F(r) = Delta'/r^n + 4|A|r"


def _probe_direction(ctx: RunContext) -> np.ndarray:
    moved = ctx.dmap.displacement()
    norms = np.linalg.norm(moved, axis=1)
    if norms.max() > 0:
        return moved[int(np.argmax(norms))]
    return np.eye(ctx.dmap.n)[0]


def run(params, ctx: RunContext) -> CheckOutcome:
    """Certify the run's map against the two-branch bound."""
    n = ctx.dmap.n
    center = np.zeros(n) if params.center is None else params.center
    ball = Ball(center, params.radius, ctx.seed)
    budget = params.budget or ctx.settings.sampling.budget

    report = certify(
        ctx.dmap,
        ctx.cost,
        ball,
        params.beta,
        budget=budget,
        cert_tolerance=ctx.settings.cert_tolerance,
    )
    payload = report.to_dict()
    artifacts = [report]
    if params.probe:
        probe = probe_lower_bound(ctx.cost, _probe_direction(ctx))
        payload["probe_delta0"] = probe.delta0
        artifacts.append(probe)

    message = "" if report.passed else f"sup {report.empirical_sup:.6e} exceeds bound {report.bound:.6e}"
    return CheckOutcome(
        check="certify",
        status=classify_status(report.passed),
        anchor=CERTIFY_ANCHOR,
        payload=payload,
        message=message,
        artifacts=tuple(artifacts),
    )


def run_lemma51(params, ctx: RunContext) -> CheckOutcome:
    """Affine-offset bound, recorded with the classical monotonicity check for the same A."""
    n = ctx.dmap.n
    matrix = np.zeros((n, n)) if params.matrix is None else np.asarray(params.matrix, dtype=float)
    center = np.zeros(n) if params.center is None else params.center
    monotonicity = check_map(
        ctx.dmap,
        ctx.cost,
        mode=DefectMode.CLASSICAL,
        matrix=matrix,
        threshold=ctx.settings.sampling.pair_threshold,
        samples=ctx.settings.sampling.pair_samples,
        seed=ctx.seed,
        threads=ctx.settings.threads,
    )
    report = lemma51_bound(
        ctx.dmap,
        matrix,
        params.offset,
        Ball(center, params.radius, ctx.seed),
        params.beta,
        budget=params.budget or ctx.settings.sampling.budget,
        cert_tolerance=ctx.settings.cert_tolerance,
        monotonicity=monotonicity,
    )
    message = "" if report.passed else f"sup {report.empirical_sup:.6e} exceeds bound {report.bound:.6e}"
    return CheckOutcome(
        check="lemma51",
        status=classify_status(report.passed),
        anchor=LEMMA51_ANCHOR,
        payload=report.to_dict() | {"monotonicity": monotonicity.to_dict()},
        message=message,
        artifacts=(report, monotonicity),
    )
