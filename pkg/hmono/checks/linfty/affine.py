"""Sup bounds for monotone maps after subtracting an affine part, u = Tx - Ax - b."""

import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from hmono.checks.linfty.mass import Ball, displacement_integral, empirical_sup
from hmono.checks.monotone.check import MonotonicityReport
from hmono.utils.maps import DiscreteMap
from hmono.utils.numerics import spectral_norm, unit_ball_volume

logger = logging.getLogger(__name__)


class AffineBranch(StrEnum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    LINEAR_FREE = "linear-free"


def f_function(r, delta_prime: float, norm: float, n: int):
    """F(r) = Delta' / r^n + 4 |A| r."""
    r = np.asarray(r, dtype=float)
    return delta_prime / r**n + 4 * norm * r


def affine_minimum(delta_prime: float, norm: float, n: int) -> float:
    """Closed-form minimum of F over r > 0 (A nonzero)."""
    return (4 * norm / (n * delta_prime)) ** (n / (n + 1)) * delta_prime + 4 * norm * (
        n * delta_prime / (4 * norm)
    ) ** (1 / (n + 1))


@dataclass(frozen=True)
class AffineEstimateReport:
    label: str
    ball: Ball
    beta: float
    matrix: np.ndarray
    offset: np.ndarray
    delta_prime: float
    norm: float
    branch: AffineBranch
    r0: float | None
    cut: float
    bound: float
    interior_value: float | None
    closed_form_minimum: float | None
    empirical_sup: float
    passed: bool
    samples: int
    stderr: float
    monotonicity_certified: bool | None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "ball": self.ball.to_dict(),
            "beta": self.beta,
            "matrix": self.matrix.tolist(),
            "offset": self.offset.tolist(),
            "delta_prime": self.delta_prime,
            "norm": self.norm,
            "branch": str(self.branch),
            "r0": self.r0,
            "cut": self.cut,
            "bound": self.bound,
            "interior_value": self.interior_value,
            "closed_form_minimum": self.closed_form_minimum,
            "empirical_sup": self.empirical_sup,
            "passed": self.passed,
            "samples": self.samples,
            "stderr": self.stderr,
            "monotonicity_certified": self.monotonicity_certified,
        }


def lemma51_bound(
    dmap: DiscreteMap,
    A=None,
    b=None,
    ball: Ball | None = None,
    beta: float = 0.5,
    budget: int = 100_000,
    cert_tolerance: float = 1e-9,
    monotonicity: MonotonicityReport | None = None,
) -> AffineEstimateReport:
    """Bound sup_{B_(beta R)} |Tx - Ax - b| by minimising F over (0, (1 - beta) R / 2].

    With A = 0 the bound is F at the cut. Otherwise the unconstrained
    minimiser r0' = (n Delta' / (4 |A|))^(1/(n+1)) is used when it lies below
    the cut and the cut itself when it does not.
    """
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    n = dmap.n
    closure = dmap.require_closure("lemma51_bound")
    A = np.zeros((n, n)) if A is None else np.atleast_2d(np.asarray(A, dtype=float))
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float).reshape(n)
    if A.shape != (n, n):
        raise ValueError(f"A must be {n}x{n}, got shape {A.shape}")
    ball = ball or Ball.unit(n)

    def residual(x):
        return np.asarray(closure(x)) - x @ A.T - b

    mass = displacement_integral(lambda x: residual(x) + x, ball, budget, power=1.0)
    delta_prime = 2 / unit_ball_volume(n) * mass.value
    norm = spectral_norm(A)
    cut = (1 - beta) * ball.radius / 2

    r0 = interior_value = closed_form = None
    if norm == 0:
        branch = AffineBranch.LINEAR_FREE
        bound = float(f_function(cut, delta_prime, 0.0, n))
    else:
        r0 = (n * delta_prime / (4 * norm)) ** (1 / (n + 1))
        if delta_prime > 0:
            interior_value = float(f_function(r0, delta_prime, norm, n))
            closed_form = affine_minimum(delta_prime, norm, n)
        if r0 < cut:
            branch = AffineBranch.INTERIOR
            bound = interior_value if interior_value is not None else 0.0
        else:
            branch = AffineBranch.BOUNDARY
            bound = float(f_function(cut, delta_prime, norm, n))

    sup, samples = empirical_sup(dmap, ball.shrink(beta), budget, field_of=residual)
    passed = sup <= bound * (1 + cert_tolerance)
    logger.info(
        "Affine bound for '%s': Delta'=%.4e, |A|=%.3f (%s), bound=%.4e, sup=%.4e, passed=%s",
        dmap.label, delta_prime, norm, branch, bound, sup, passed,
    )
    return AffineEstimateReport(
        label=dmap.label,
        ball=ball,
        beta=beta,
        matrix=A,
        offset=b,
        delta_prime=delta_prime,
        norm=norm,
        branch=branch,
        r0=r0,
        cut=cut,
        bound=bound,
        interior_value=interior_value,
        closed_form_minimum=closed_form,
        empirical_sup=sup,
        passed=passed,
        samples=samples,
        stderr=2 / unit_ball_volume(n) * mass.stderr,
        monotonicity_certified=None if monotonicity is None else monotonicity.passed,
    )
