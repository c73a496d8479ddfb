"""Fluid suite: velocity and flux of the interpolation, continuity residual and the action sandwich."""

import numpy as np

from hmono.checks.fluid.action import (
    ActionEstimate,
    SandwichReport,
    action_integral,
    dilation_action_closed_form,
    pulled_back_action,
    sandwich_check,
    static_cost,
    time_nodes,
)
from hmono.checks.fluid.continuity import ContinuityReport, continuity_residual
from hmono.checks.fluid.flow import FlowField, flow_field, velocity
from hmono.checks.interpolation.density import uniform_density
from hmono.utils.sampling import ball_points
from hmono.utils.types import CheckOutcome, CheckStatus, RunContext

ANCHOR = "action sandwich int_B'' |Tz - z|^p rho0 <= int int |j|^p / rho^(p-1) <= int_B' |Tz - z|^p rho0"

# unit density on [-2, 2]^n: normalised at the origin and flat on B_1
SOURCE_HALF_WIDTH = 2.0
CONTINUITY_POINTS = 16


def run(params, ctx: RunContext) -> CheckOutcome:
    settings = ctx.settings
    dmap = ctx.dmap
    budget = params.budget or settings.sampling.budget
    rho0 = uniform_density(dmap.n, SOURCE_HALF_WIDTH)

    report = sandwich_check(
        dmap,
        ctx.cost,
        rho0,
        params.beta_inner,
        params.beta,
        params.beta_outer,
        params.t_samples,
        budget,
        ctx.seed,
        settings.newton_max_iter,
        settings.newton_tol,
    )
    payload = report.to_dict()
    artifacts = [report]

    if report.status != CheckStatus.GATED:
        field = flow_field(dmap, rho0, settings.newton_max_iter, settings.newton_tol)
        points = ball_points(np.zeros(dmap.n), params.beta, CONTINUITY_POINTS, ctx.seed + 3)
        continuity = continuity_residual(field, points, time_nodes(params.t_samples)[0])
        pulled = pulled_back_action(dmap, rho0, ctx.cost.p, params.beta, params.t_samples, budget, seed=ctx.seed)
        payload["continuity"] = continuity.to_dict()
        payload["pulled_back_action"] = pulled.to_dict()
        artifacts += [continuity, pulled]

    return CheckOutcome(
        check="fluid",
        status=report.status,
        anchor=ANCHOR,
        payload=payload,
        message=report.reason,
        artifacts=tuple(artifacts),
    )
