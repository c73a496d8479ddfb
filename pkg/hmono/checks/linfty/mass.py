"""Displacement integrals over balls."""

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from hmono.checks.cost.kernel import CostFunction
from hmono.utils.maps import DiscreteMap
from hmono.utils.sampling import ball_points, ball_rule
from hmono.utils.types import VectorField

logger = logging.getLogger(__name__)

CLEAN_STDERR = 0.01


@dataclass(frozen=True)
class Ball:
    center: NDArray
    radius: float
    sampler_seed: int = 0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"Ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)))

    @classmethod
    def unit(cls, n: int, seed: int = 0) -> "Ball":
        return cls(np.zeros(n), 1.0, seed)

    @property
    def n(self) -> int:
        return self.center.size

    def shrink(self, factor: float) -> "Ball":
        return Ball(self.center, factor * self.radius, self.sampler_seed)

    def contains(self, points: NDArray) -> NDArray:
        return np.linalg.norm(np.atleast_2d(points) - self.center, axis=1) <= self.radius

    def to_dict(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius, "sampler_seed": self.sampler_seed}


@dataclass(frozen=True)
class MassEstimate:
    value: float
    stderr: float
    samples: int
    power: float = field(default=1.0)

    @property
    def clean(self) -> bool:
        return self.stderr <= CLEAN_STDERR * abs(self.value)

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "samples": self.samples, "clean": self.clean}


def displacement_integral(closure: VectorField, ball: Ball, budget: int, power: float) -> MassEstimate:
    """int_ball |T x - x|^power dx by the ball rule (QMC for n >= 2, Gauss panels for n = 1)."""
    if budget < 1:
        raise ValueError(f"Quadrature budget must be positive, got {budget}")
    rule = ball_rule(ball.center, ball.radius, budget, ball.sampler_seed)
    displacement = np.asarray(closure(rule.points)) - rule.points
    values = np.linalg.norm(displacement, axis=1) ** power
    value, stderr = rule.integrate(values)
    logger.debug("Displacement integral (power %.2f) over %d nodes: %.6e +- %.1e", power, len(values), value, stderr)
    return MassEstimate(value, stderr, len(values), power)


def lp_mass(dmap: DiscreteMap, c: CostFunction, ball: Ball, budget: int = 100_000) -> MassEstimate:
    """Delta = int_{B_R(x0)} |T x - x|^p dx."""
    closure = dmap.require_closure("lp_mass")
    return displacement_integral(closure, ball, budget, c.p)


def empirical_sup(dmap: DiscreteMap, ball: Ball, budget: int, field_of=None) -> tuple[float, int]:
    """max |u| over low-discrepancy points of the ball plus every stored source inside it.

    ``field_of`` maps points to the displacement to measure; it defaults to
    T x - x through the closure.
    """
    closure = dmap.require_closure("empirical_sup")
    field_of = field_of or (lambda x: np.asarray(closure(x)) - x)
    if ball.n == 1:
        samples = ball_rule(ball.center, ball.radius, budget).points
    else:
        samples = ball_points(ball.center, ball.radius, budget, ball.sampler_seed + 1)
    stored = dmap.sources[ball.contains(dmap.sources)]
    points = np.vstack([samples, stored]) if len(stored) else samples
    values = np.linalg.norm(field_of(points), axis=1)
    return float(values.max()), len(points)
