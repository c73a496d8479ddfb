"""Deterministic low-discrepancy samplers for balls and spheres."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.stats import norm, qmc

from hmono.utils.numerics import sphere_area, unit_ball_volume
from hmono.utils.types import PointArray

logger = logging.getLogger(__name__)

# 1-D balls are intervals; they get composite Gauss-Legendre panels instead of QMC.
PANEL_ORDER = 8


def sobol_points(dim: int, count: int, seed: int | None = 0, scramble: bool = True) -> NDArray:
    """First ``count`` points of a Sobol sequence drawn as a full power-of-two block."""
    if count < 1:
        raise ValueError(f"Sample budget must be positive, got {count}")
    m = max(0, math.ceil(math.log2(count)))
    sampler = qmc.Sobol(d=dim, scramble=scramble, seed=seed if scramble else None)
    return sampler.random_base2(m)[:count]


@dataclass(frozen=True)
class BallRule:
    """Nodes and weights integrating over a ball; weights sum to the ball volume."""

    points: PointArray
    weights: NDArray
    volume: float
    qmc: bool

    def integrate(self, values: NDArray) -> tuple[float, float]:
        values = np.asarray(values, dtype=float)
        estimate = float(np.dot(self.weights, values))
        if not self.qmc:
            return estimate, 0.0
        count = values.size
        if count < 2:
            return estimate, 0.0
        stderr = self.volume * float(np.std(values, ddof=1)) / math.sqrt(count)
        return estimate, stderr


def ball_points(center: NDArray, radius: float, count: int, seed: int = 0) -> PointArray:
    """Scrambled Sobol points in the bounding cube, kept when inside the ball."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    n = center.size
    if radius <= 0:
        raise ValueError(f"Ball radius must be positive, got {radius}")
    fraction = unit_ball_volume(n) / 2**n
    draw = max(2, math.ceil(1.1 * count / fraction))
    while True:
        cube = 2 * sobol_points(n, draw, seed) - 1
        inside = cube[np.einsum("ij,ij->i", cube, cube) <= 1.0]
        if len(inside) >= count:
            return center + radius * inside[:count]
        draw *= 2


def ball_rule(center: NDArray, radius: float, budget: int, seed: int = 0) -> BallRule:
    center = np.atleast_1d(np.asarray(center, dtype=float))
    n = center.size
    volume = unit_ball_volume(n) * radius**n
    if budget < 1:
        raise ValueError(f"Quadrature budget must be positive, got {budget}")

    if n == 1:
        panels = max(2, 2 * (budget // (2 * PANEL_ORDER)))
        nodes, weights = np.polynomial.legendre.leggauss(PANEL_ORDER)
        edges = np.linspace(-radius, radius, panels + 1)
        half = (edges[1:] - edges[:-1]) / 2
        mid = (edges[1:] + edges[:-1]) / 2
        points = (mid[:, None] + half[:, None] * nodes[None, :]).reshape(-1, 1) + center
        w = (half[:, None] * weights[None, :]).ravel()
        return BallRule(points, w, volume, qmc=False)

    points = ball_points(center, radius, budget, seed)
    return BallRule(points, np.full(len(points), volume / len(points)), volume, qmc=True)


def sphere_directions(n: int, count: int, seed: int = 0) -> PointArray:
    """Antithetic low-discrepancy unit vectors; each direction appears with its negative.

    In three dimensions an unscrambled Sobol net is pushed through the
    area-preserving cylinder map, so the first coordinate is equispaced and
    zonal integrands are integrated by the trapezoidal rule.
    """
    match n:
        case 1:
            return np.array([[1.0], [-1.0]])
        case 2:
            u = sobol_points(1, count, scramble=False)[:, 0]
            angle = 2 * math.pi * u
            half = np.column_stack([np.cos(angle), np.sin(angle)])
        case 3:
            uv = sobol_points(2, count, scramble=False)
            z = 1 - 2 * uv[:, 0]
            phi = 2 * math.pi * uv[:, 1]
            rho = np.sqrt(np.clip(1 - z**2, 0.0, None))
            half = np.column_stack([z, rho * np.cos(phi), rho * np.sin(phi)])
        case _:
            u = sobol_points(n, count, seed=seed)
            gauss = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
            half = gauss / np.linalg.norm(gauss, axis=1, keepdims=True)
    return np.vstack([half, -half])


def sphere_rule(n: int, count: int, seed: int = 0) -> tuple[PointArray, float]:
    """Directions and the equal weight each carries; weights sum to the sphere area."""
    directions = sphere_directions(n, count, seed)
    return directions, sphere_area(n) / len(directions)


def fibonacci_sphere(count: int) -> PointArray:
    golden = math.pi * (3 - math.sqrt(5))
    k = np.arange(count) + 0.5
    z = 1 - 2 * k / count
    rho = np.sqrt(1 - z**2)
    phi = golden * k
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def sphere_grid(n: int, count: int) -> PointArray:
    """Quasi-uniform deterministic sample of the unit sphere in R^n."""
    match n:
        case 1:
            return np.array([[1.0], [-1.0]])
        case 2:
            angle = 2 * math.pi * np.arange(count) / count
            return np.column_stack([np.cos(angle), np.sin(angle)])
        case 3:
            return fibonacci_sphere(count)
        case _:
            # hyperspherical angles on a tensor grid
            per_axis = max(4, round(count ** (1 / (n - 1))))
            polar = [np.linspace(0, math.pi, per_axis) for _ in range(n - 2)]
            azimuth = np.linspace(0, 2 * math.pi, 2 * per_axis, endpoint=False)
            angles = np.stack(np.meshgrid(*polar, azimuth, indexing="ij"), axis=-1).reshape(-1, n - 1)
            points = np.ones((len(angles), n))
            for k in range(n - 1):
                points[:, k] *= np.cos(angles[:, k])
                points[:, k + 1 :] *= np.sin(angles[:, k])[:, None]
            return points
