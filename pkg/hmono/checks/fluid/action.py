"""The flow action int int |j|^p / rho^(p-1) and its two-sided sandwich by the static cost."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from hmono.checks.cost.kernel import CostFunction
from hmono.checks.fluid.flow import FlowField, flow_field
from hmono.checks.interpolation.density import Density
from hmono.checks.interpolation.inclusion import unit_energy
from hmono.checks.interpolation.tmap import invert_t_map, t_map
from hmono.checks.linfty.bounds import thm21_bound
from hmono.checks.linfty.constants import estimate_constants
from hmono.errors import NonFiniteError
from hmono.utils.maps import DiscreteMap
from hmono.utils.numerics import unit_ball_volume
from hmono.utils.sampling import ball_points, ball_rule
from hmono.utils.types import CheckStatus, classify_status

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActionEstimate:
    value: float
    stderr: float
    samples: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "samples": self.samples}


def time_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    if count < 1:
        raise ValueError(f"Need at least one time sample, got {count}")
    nodes, weights = np.polynomial.legendre.leggauss(count)
    return (nodes + 1) / 2, weights / 2


def _time_integral(per_time, t_samples: int) -> tuple[float, float]:
    nodes, weights = time_nodes(t_samples)
    values, errors = zip(*(per_time(t) for t in nodes))
    value = float(np.dot(weights, values))
    stderr = float(math.sqrt(np.dot(weights**2, np.square(errors))))
    return value, stderr


def action_integral(
    field: FlowField,
    n: int,
    p: float,
    beta: float,
    t_samples: int = 8,
    budget: int = 100_000,
    seed: int = 0,
) -> ActionEstimate:
    rule = ball_rule(np.zeros(n), beta, budget, seed)

    def per_time(t):
        rho = field.density(rule.points, t)
        if np.any(~np.isfinite(rho)):
            raise NonFiniteError(f"density is not finite on B_{beta} at t={t}")
        if np.any(rho <= 0):
            raise ValueError(f"density must be positive on B_{beta}, vanishes at t={t}")
        flux = rho[:, None] * field.velocity(rule.points, t)
        return rule.integrate(np.linalg.norm(flux, axis=1) ** p / rho ** (p - 1))

    value, stderr = _time_integral(per_time, t_samples)
    logger.debug("Action over B_%.3f: %.6e +- %.1e", beta, value, stderr)
    return ActionEstimate(value, stderr, t_samples * len(rule.points))


def static_cost(dmap: DiscreteMap, rho0: Density, p: float, radius: float, budget: int, seed: int = 0):
    """int_{B_radius} |Tz - z|^p rho0(z) dz."""
    closure = dmap.require_closure("static_cost")
    rule = ball_rule(np.zeros(dmap.n), radius, budget, seed)
    moved = np.linalg.norm(np.asarray(closure(rule.points)) - rule.points, axis=1) ** p
    return rule.integrate(moved * rho0(rule.points))


def pulled_back_action(
    dmap: DiscreteMap,
    rho0: Density,
    p: float,
    beta: float,
    t_samples: int = 8,
    budget: int = 100_000,
    enclosing_radius: float = 1.0,
    seed: int = 0,
) -> ActionEstimate:
    """int_0^1 int_{T_t^-1(B_beta)} |Tz - z|^p rho0(z) dz dt with the preimage cut out of B_enclosing."""
    closure = dmap.require_closure("pulled_back_action")
    rule = ball_rule(np.zeros(dmap.n), enclosing_radius, budget, seed)
    moved = np.linalg.norm(np.asarray(closure(rule.points)) - rule.points, axis=1) ** p * rho0(rule.points)

    def per_time(t):
        inside = np.linalg.norm(t_map(dmap, t, rule.points), axis=1) < beta
        return rule.integrate(np.where(inside, moved, 0.0))

    value, stderr = _time_integral(per_time, t_samples)
    return ActionEstimate(value, stderr, t_samples * len(rule.points))


def dilation_action_closed_form(eps: float, n: int, p: float, beta: float) -> float:
    """Action of T = (1 + eps) Id with unit density on B_beta."""
    if eps == 0:
        return 0.0
    k = n + p - 1
    radial = n * unit_ball_volume(n) * beta ** (n + p) / (n + p)
    return eps**p * radial * (1 - (1 + eps) ** (-k)) / (eps * k)


@dataclass(frozen=True)
class SandwichReport:
    lower: float
    action: float
    upper: float
    stderr: float
    status: CheckStatus
    regime_sup: float
    bound_regime: float
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASSED

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "action": self.action,
            "upper": self.upper,
            "stderr": self.stderr,
            "status": str(self.status),
            "pass": self.passed,
            "regime_sup": self.regime_sup,
            "bound_regime": self.bound_regime,
            "reason": self.reason,
        }


def sandwich_check(
    dmap: DiscreteMap,
    c: CostFunction,
    rho0: Density,
    beta_inner: float,
    beta: float,
    beta_outer: float,
    t_samples: int = 8,
    budget: int = 100_000,
    seed: int = 0,
    max_iter: int = 50,
    tol: float = 1e-10,
) -> SandwichReport:
    """lower(B_beta_inner) <= action(B_beta) <= upper(B_beta_outer), gated on the empirical regime.

    The regime requires sup |T_t x| < beta over B_beta_inner and
    T_t^-1(B_beta) inside B_beta_outer on the time nodes. The bound-based
    regime value beta_inner + (two-branch bound) is reported alongside.
    """
    if not 0 < beta_inner < beta < beta_outer < 1:
        raise ValueError(f"need 0 < beta'' < beta < beta' < 1, got {beta_inner}, {beta}, {beta_outer}")
    n = dmap.n
    nodes, _ = time_nodes(t_samples)

    inner = ball_points(np.zeros(n), beta_inner, min(budget, 4096), seed + 1)
    regime_sup = max(float(np.linalg.norm(t_map(dmap, t, inner), axis=1).max()) for t in nodes)
    targets = ball_points(np.zeros(n), beta, min(budget, 4096), seed + 2)
    preimage_sup, failures = 0.0, 0
    for t in nodes:
        inverse = invert_t_map(dmap, t, targets, max_iter, tol)
        failures += inverse.failures
        reached = np.linalg.norm(inverse.points[inverse.converged], axis=1).max(initial=0.0)
        preimage_sup = max(preimage_sup, float(reached))

    energy, _ = unit_energy(dmap, c, budget)
    bound = thm21_bound(energy, 1.0, beta_inner, estimate_constants(c)).bound

    reason = ""
    if regime_sup >= beta:
        reason = f"hypothesis not met: sup |T_t x| over B_beta'' is {regime_sup:.4f} >= beta"
    elif failures or preimage_sup > beta_outer:
        reason = f"hypothesis not met: T_t^-1(B_beta) reaches radius {preimage_sup:.4f} > beta'"
    if reason:
        logger.warning("Sandwich for '%s' gated: %s", dmap.label, reason)
        nan = math.nan
        return SandwichReport(nan, nan, nan, nan, CheckStatus.GATED, regime_sup, beta_inner + bound, reason)

    lower, lower_err = static_cost(dmap, rho0, c.p, beta_inner, budget, seed)
    upper, upper_err = static_cost(dmap, rho0, c.p, beta_outer, budget, seed)
    action = action_integral(flow_field(dmap, rho0, max_iter, tol), n, c.p, beta, t_samples, budget, seed)
    slack = 3 * math.hypot(lower_err, action.stderr, upper_err) + 1e-9 * max(abs(upper), 1e-300)
    ordered = lower <= action.value + slack and action.value <= upper + slack

    logger.info("Sandwich for '%s': %.4e <= %.4e <= %.4e (%s)", dmap.label, lower, action.value, upper, ordered)
    return SandwichReport(
        lower=lower,
        action=action.value,
        upper=upper,
        stderr=action.stderr,
        status=classify_status(ordered),
        regime_sup=regime_sup,
        bound_regime=beta_inner + bound,
    )
