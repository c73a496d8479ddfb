"""Interpolation suite: T_t, ball inclusion, determinant log-concavity and interpolated densities."""

import numpy as np

from hmono.checks.interpolation.density import (
    Box,
    Density,
    DensitySnapshot,
    DensitySupReport,
    Grid,
    density_closed_form,
    density_pushforward,
    density_sup_check,
    holder_seminorm,
    pushed_density,
    sample_particles,
    smooth_bump,
    transported_density,
    uniform_density,
)
from hmono.checks.interpolation.determinant import det_interp_bound_check, det_logconcavity_residual
from hmono.checks.interpolation.inclusion import InterpolationResult, inclusion_check, unit_energy
from hmono.checks.interpolation.tmap import invert_t_map, t_jacobian, t_map
from hmono.checks.linfty.bounds import inverse_map_bound
from hmono.errors import UnsupportedInputError
from hmono.utils.sampling import ball_points
from hmono.utils.types import CheckOutcome, RunContext, classify_status

ANCHOR = "inclusion T_t^-1(B_beta) in B_beta_bar, det grad T_t >= (det grad T)^t, rho_t = (T_t)# rho_0"

DET_PROBES = 16


def _det_residuals(dmap, t_grid, fd_step: float) -> tuple[float, int]:
    """Smallest det residual over probe points of B_1/2 and the number of probes without a PD Jacobian."""
    worst, not_pd = np.inf, 0
    for x in ball_points(np.zeros(dmap.n), 0.5, DET_PROBES, seed=3):
        try:
            worst = min(worst, *(det_interp_bound_check(dmap, x, t, fd_step) for t in t_grid))
        except UnsupportedInputError:
            not_pd += 1
    return (float(worst) if np.isfinite(worst) else 0.0), not_pd


def relative_gap(closed: DensitySnapshot, pushed: DensitySnapshot) -> float:
    """Median relative difference over cells where the closed form is positive."""
    mask = (closed.values > 0) & ~closed.failed
    if not mask.any():
        return 0.0
    return float(np.median(np.abs(pushed.values[mask] - closed.values[mask]) / closed.values[mask]))


def run(params, ctx: RunContext) -> CheckOutcome:
    """Inclusion on every map; densities, determinants and the inverse bound when a closure exists."""
    settings = ctx.settings
    budget = params.budget or settings.sampling.budget
    dmap, n = ctx.dmap, ctx.dmap.n

    inclusion = inclusion_check(dmap, ctx.cost, params.beta, params.beta_bar, params.t_grid, budget, ctx.seed)
    payload = {"inclusion": inclusion.to_dict()}
    artifacts = [inclusion]
    passed, gated, reasons = inclusion.holds, False, []

    if dmap.has_closure:
        det_worst, not_pd = _det_residuals(dmap, params.t_grid, settings.fd_step)
        payload["det_residual_min"] = det_worst
        payload["det_not_pd"] = not_pd
        if not_pd:
            gated = True
            reasons.append(f"Jacobian not positive definite at {not_pd} probe points")
        passed &= det_worst >= -10 * settings.fd_step

        rho0 = uniform_density(n, params.box)
        grid = Grid(Box.symmetric(n, params.box), params.cells)
        particles = params.particles or settings.sampling.particles
        snapshots, gaps = [], []
        for t in params.t_grid:
            closed = density_closed_form(dmap, rho0, t, grid, settings.newton_max_iter, settings.newton_tol)
            pushed = density_pushforward(dmap, rho0, t, grid, particles, ctx.seed, settings.threads)
            snapshots += [closed, pushed]
            gaps.append(relative_gap(closed, pushed))
        payload["snapshots"] = [s.to_dict() for s in snapshots]
        payload["pushforward_median_rel_error"] = gaps

        rho1 = pushed_density(dmap, rho0, 1.0, settings.newton_max_iter, settings.newton_tol)
        sup_report = density_sup_check(
            rho0,
            rho1,
            snapshots,
            params.beta,
            energy=inclusion.energy,
            energy_threshold=params.energy_threshold,
        )
        payload["density_sup"] = sup_report.to_dict()
        if sup_report.reason:
            gated = True
            reasons.append(sup_report.reason)
        passed &= sup_report.passed or bool(sup_report.reason)

        inverse = inverse_map_bound(
            dmap,
            ctx.cost,
            params.beta,
            params.beta_bar,
            inclusion_holds=1.0 not in inclusion.violations["t"].tolist(),
            budget=budget,
            max_iter=settings.newton_max_iter,
            tol=settings.newton_tol,
        )
        payload["inverse_map"] = inverse.to_dict()
        passed &= inverse.passed or inverse.gated
        artifacts += [*snapshots, sup_report, inverse]

    too_large = params.energy_threshold is not None and inclusion.energy > params.energy_threshold
    if not inclusion.holds and too_large:
        gated = True
        reasons.append("hypothesis regime not met: inclusion violated with energy above threshold")

    message = "; ".join(reasons) if reasons else ("" if passed else "interpolation checks failed")
    return CheckOutcome(
        check="interp",
        status=classify_status(bool(passed), gated),
        anchor=ANCHOR,
        payload=payload,
        message=message,
        artifacts=tuple(artifacts),
    )
