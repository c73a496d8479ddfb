"""The two-branch local L-infinity bound and its empirical certification."""

import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import pandas as pd

from hmono.checks.cost.kernel import CostFunction
from hmono.checks.linfty.constants import EstimateConstants, estimate_constants
from hmono.checks.linfty.mass import Ball, displacement_integral, empirical_sup, lp_mass
from hmono.checks.linfty.models import H_CURVE_SCHEMA
from hmono.checks.monotone.check import MonotonicityReport
from hmono.utils.maps import DiscreteMap
from hmono.utils.numerics import invert_interpolation, unit_ball_volume
from hmono.utils.sampling import ball_points
from hmono.utils.validators import require_valid

logger = logging.getLogger(__name__)


class Branch(StrEnum):
    SMALL = "small"
    LARGE = "large"


@dataclass(frozen=True)
class BoundResult:
    branch: Branch
    r0: float
    delta0: float
    cut: float
    bound: float


def _check_beta(beta: float) -> None:
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")


def branch_threshold(radius: float, beta: float, consts: EstimateConstants) -> float:
    """Delta0 = ((1 - beta) R / 2)^(n + p) (p - 1) C2 / ((n + 1) C1)."""
    n, p = consts.n, consts.p
    return ((1 - beta) * radius / 2) ** (n + p) * (p - 1) * consts.C2 / ((n + 1) * consts.C1)


def minimiser(delta: float, consts: EstimateConstants) -> float:
    n, p = consts.n, consts.p
    return ((n + 1) * consts.C1 * delta / ((p - 1) * consts.C2)) ** (1 / (n + p))


def thm21_bound(delta: float, radius: float, beta: float, consts: EstimateConstants) -> BoundResult:
    _check_beta(beta)
    if delta < 0:
        raise ValueError(f"Delta must be nonnegative, got {delta}")
    if radius <= 0:
        raise ValueError(f"Radius must be positive, got {radius}")

    n, p = consts.n, consts.p
    cut = (1 - beta) * radius / 2
    delta0 = branch_threshold(radius, beta, consts)
    r0 = minimiser(delta, consts)
    if delta <= delta0:
        bound = consts.K1 ** (1 / (p - 1)) * delta ** (1 / (n + p))
        return BoundResult(Branch.SMALL, r0, delta0, cut, bound)
    bound = (consts.K2(beta) * radius ** (-(n + 1)) * delta) ** (1 / (p - 1))
    return BoundResult(Branch.LARGE, r0, delta0, cut, bound)


def h_function(r, delta: float, consts: EstimateConstants):
    """H(r) = C1 Delta r^-(n+1) + C2 r^(p-1)."""
    r = np.asarray(r, dtype=float)
    return consts.C1 * delta * r ** (-(consts.n + 1)) + consts.C2 * r ** (consts.p - 1)


def min_H_closed_form(delta: float, consts: EstimateConstants) -> float:
    n, p, k = consts.n, consts.p, consts.kappa
    return (
        (k ** (-(n + 1) / (n + p)) + k ** ((p - 1) / (n + p)))
        * (consts.C1 * delta) ** ((p - 1) / (n + p))
        * consts.C2 ** ((n + 1) / (n + p))
    )


def h_curve(delta: float, radius: float, beta: float, consts: EstimateConstants, grid=None) -> pd.DataFrame:
    """H(r) tabulated on a grid, with the minimiser r0 and the admissible cut marked."""
    _check_beta(beta)
    cut = (1 - beta) * radius / 2
    r0 = minimiser(delta, consts)
    if grid is None:
        grid = np.geomspace(cut / 100, cut, 200)
    grid = np.asarray(grid, dtype=float)
    if 0 < r0 <= cut:
        grid = np.union1d(grid, [r0])
    grid = grid[grid > 0]
    frame = pd.DataFrame(
        {
            "r": grid,
            "H": h_function(grid, delta, consts),
            "is_r0": np.isclose(grid, r0, rtol=1e-12, atol=0.0),
            "admissible": grid <= cut * (1 + 1e-12),
        }
    )
    return require_valid(frame, H_CURVE_SCHEMA, "H(r) table")


def statement_threshold(delta: float, radius: float, beta: float, consts: EstimateConstants) -> tuple[float, float]:
    """(R^-p avg_{B_R} |u|^p, threshold); the small branch applies iff the first is at most the second."""
    _check_beta(beta)
    n, p = consts.n, consts.p
    omega = unit_ball_volume(n)
    scaled_average = delta / (omega * radius ** (n + p))
    threshold = ((1 - beta) / 2) ** (n + p) * (p - 1) * consts.C2 / ((n + 1) * consts.C1 * omega)
    return scaled_average, threshold


@dataclass(frozen=True)
class EstimateReport:
    label: str
    ball: Ball
    beta: float
    delta: float
    delta0: float
    branch: Branch
    r0: float
    bound: float
    empirical_sup: float
    passed: bool
    samples: int
    stderr: float
    quadrature_clean: bool
    constants_extrapolated: bool
    monotonicity_certified: bool | None
    constants: EstimateConstants

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "ball": self.ball.to_dict(),
            "beta": self.beta,
            "delta": self.delta,
            "delta0": self.delta0,
            "branch": str(self.branch),
            "r0": self.r0,
            "bound": self.bound,
            "empirical_sup": self.empirical_sup,
            "passed": self.passed,
            "samples": self.samples,
            "stderr": self.stderr,
            "quadrature_clean": self.quadrature_clean,
            "constants_extrapolated": self.constants_extrapolated,
            "monotonicity_certified": self.monotonicity_certified,
            "constants": self.constants.to_dict() | {"K2": self.constants.K2(self.beta)},
        }


def certify(
    dmap: DiscreteMap,
    c: CostFunction,
    ball: Ball,
    beta: float,
    consts: EstimateConstants | None = None,
    budget: int = 100_000,
    cert_tolerance: float = 1e-9,
    monotonicity: MonotonicityReport | None = None,
) -> EstimateReport:
    """Compare sup_{B_(beta R)} |Tx - x| with the two-branch bound computed from Delta on B_R."""
    _check_beta(beta)
    consts = consts or estimate_constants(c)
    mass = lp_mass(dmap, c, ball, budget)
    result = thm21_bound(mass.value, ball.radius, beta, consts)
    sup, samples = empirical_sup(dmap, ball.shrink(beta), budget)
    passed = sup <= result.bound * (1 + cert_tolerance)

    if not mass.clean:
        logger.warning("Delta standard error %.2e exceeds 1%% of Delta %.3e", mass.stderr, mass.value)
    logger.info(
        "Certified '%s': Delta=%.4e (%s branch), bound=%.4e, sup=%.4e, passed=%s",
        dmap.label, mass.value, result.branch, result.bound, sup, passed,
    )
    return EstimateReport(
        label=dmap.label,
        ball=ball,
        beta=beta,
        delta=mass.value,
        delta0=result.delta0,
        branch=result.branch,
        r0=result.r0,
        bound=result.bound,
        empirical_sup=sup,
        passed=passed,
        samples=samples,
        stderr=mass.stderr,
        quadrature_clean=mass.clean,
        constants_extrapolated=c.n == 2,
        monotonicity_certified=None if monotonicity is None else monotonicity.passed,
        constants=consts,
    )


@dataclass(frozen=True)
class InverseMapReport:
    beta: float
    beta_bar: float
    bound: float
    empirical_sup: float
    passed: bool
    gated: bool
    samples: int
    failures: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def inverse_map_bound(
    dmap: DiscreteMap,
    c: CostFunction,
    beta: float,
    beta_bar: float,
    inclusion_holds: bool,
    budget: int = 100_000,
    consts: EstimateConstants | None = None,
    max_iter: int = 50,
    tol: float = 1e-10,
) -> InverseMapReport:
    """sup_{B_beta} |T^-1 y - y| against the bound on B_beta_bar of the unit ball estimate.

    The bound only applies when T^-1(B_beta) lies inside B_beta_bar; the
    caller passes the outcome of the inclusion check at t = 1.
    """
    _check_beta(beta)
    _check_beta(beta_bar)
    consts = consts or estimate_constants(c)
    closure = dmap.require_closure("inverse_map_bound")
    mass = displacement_integral(closure, Ball.unit(dmap.n), budget, c.p)
    bound = thm21_bound(mass.value, 1.0, beta_bar, consts).bound

    targets = ball_points(np.zeros(dmap.n), beta, budget, seed=2)
    inverse = invert_interpolation(closure, dmap.jacobian, 1.0, targets, max_iter, tol)
    moved = np.linalg.norm(inverse.points[inverse.converged] - targets[inverse.converged], axis=1)
    inside = np.linalg.norm(dmap.images, axis=1) < beta
    stored = np.linalg.norm(dmap.sources[inside] - dmap.images[inside], axis=1)
    sup = float(np.concatenate([moved, stored]).max(initial=0.0))

    return InverseMapReport(
        beta=beta,
        beta_bar=beta_bar,
        bound=bound,
        empirical_sup=sup,
        passed=sup <= bound * (1 + 1e-9),
        gated=not inclusion_holds,
        samples=len(moved) + len(stored),
        failures=inverse.failures,
    )
