"""Green suite: numerical checks of the ball-averaged representation identity."""

import numpy as np

from hmono.checks.cost.kernel import build_cost
from hmono.checks.green.decomposition import DecompositionProbe, proof_decomposition_probe
from hmono.checks.green.identity import (
    ConvergenceStudy,
    IdentityTerms,
    convergence_study,
    identity_residual,
    identity_terms,
)
from hmono.checks.green.kernel import (
    TestFunction,
    check_laplacian,
    gamma,
    gamma_constant,
    gaussian,
    harmonic,
    named_function,
    quadratic,
)
from hmono.utils.types import CheckOutcome, RunContext, classify_status

ANCHOR = "ball-averaged Green representation f(y) = avg f + int (Gamma - Gamma(rho)) Delta f"

TOLERANCES = {"harmonic": 1e-6, "quadratic": 1e-4, "gaussian": 1e-3}
DECOMPOSITION_TOLERANCE = 1e-3


def run(params, ctx: RunContext) -> CheckOutcome:
    n = params.n
    f = named_function(params.function, n)
    center = np.zeros(n) if params.center is None else np.asarray(params.center, dtype=float)
    radial_order = ctx.settings.sampling.green_radial_order

    study = convergence_study(f, n, center, params.radius, params.budgets, radial_order)
    final = float(study.table["residual"].iloc[-1])
    passed = final <= TOLERANCES[params.function]
    payload = study.to_dict() | {"final_residual": final, "tolerance": TOLERANCES[params.function]}
    artifacts = [study]

    if params.probe_delta is not None:
        cost = ctx.cost if ctx.cost.n == n else build_cost(n, ctx.cost.p)
        probe = proof_decomposition_probe(
            cost,
            np.eye(n)[0],
            params.probe_delta,
            ctx.settings.sampling.green_budget,
            radial_order,
        )
        payload["decomposition"] = probe.to_dict()
        passed &= probe.residual <= DECOMPOSITION_TOLERANCE
        artifacts.append(probe)

    message = "" if passed else f"identity residual {final:.3e} above {TOLERANCES[params.function]:.0e}"
    return CheckOutcome(
        check="green-check",
        status=classify_status(bool(passed)),
        anchor=ANCHOR,
        payload=payload,
        message=message,
        artifacts=tuple(artifacts),
    )
