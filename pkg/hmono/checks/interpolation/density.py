"""Interpolated densities rho_t = (T_t)# rho_0: closed form, particle pushforward and the sup check."""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from scipy.special import erf
from scipy.stats import truncnorm

from hmono.checks.interpolation.models import SUP_CHECK_SCHEMA, density_schema
from hmono.checks.interpolation.tmap import invert_t_map, t_jacobian, t_map
from hmono.utils.maps import DiscreteMap
from hmono.utils.sampling import ball_points, sobol_points
from hmono.utils.types import CheckStatus, PointArray, Provenance, ScalarField, classify_status
from hmono.utils.validators import require_valid

logger = logging.getLogger(__name__)

MIN_PARTICLES = 10_000
NORMALISATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Box:
    lower: NDArray
    upper: NDArray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or np.any(upper <= lower):
            raise ValueError(f"Box needs lower < upper per axis, got {lower.tolist()} and {upper.tolist()}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def symmetric(cls, n: int, half: float) -> "Box":
        return cls(np.full(n, -half), np.full(n, half))

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def contains(self, points: PointArray) -> NDArray:
        return np.all((points >= self.lower) & (points <= self.upper), axis=1)


@dataclass(frozen=True)
class Grid:
    """Regular lattice of ``cells`` cells per axis over a box."""

    box: Box
    cells: int

    def __post_init__(self):
        if self.cells < 1:
            raise ValueError(f"Grid needs at least one cell per axis, got {self.cells}")

    @property
    def edges(self) -> list[NDArray]:
        return [np.linspace(lo, hi, self.cells + 1) for lo, hi in zip(self.box.lower, self.box.upper)]

    @property
    def centers(self) -> PointArray:
        axes = [(e[1:] + e[:-1]) / 2 for e in self.edges]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.box.n)

    @property
    def cell_volume(self) -> float:
        return self.box.volume / self.cells**self.box.n


@dataclass(frozen=True, eq=False)
class Density:
    """A density closure with the data needed to sample from it."""

    label: str
    value: ScalarField = field(repr=False)
    mass: float
    peak: float
    support: Box | None = None
    ppf: tuple[Callable, ...] | None = field(default=None, repr=False)

    def __call__(self, x) -> NDArray:
        return np.asarray(self.value(np.atleast_2d(x)), dtype=float)


def uniform_density(n: int, half: float = 1.0, level: float = 1.0) -> Density:
    box = Box.symmetric(n, half)

    def value(x):
        return np.where(box.contains(x), level, 0.0)

    ppf = tuple((lambda u, lo=lo, hi=hi: lo + (hi - lo) * u) for lo, hi in zip(box.lower, box.upper))
    return Density(f"uniform[{half}]", value, level * box.volume, level, box, ppf)


def smooth_bump(n: int, width: float = 0.5, half: float = 2.0) -> Density:
    """exp(-|x|^2 / (2 width^2)) truncated to the box [-half, half]^n; equals 1 at the origin."""
    if width <= 0 or half <= 0:
        raise ValueError(f"width and half must be positive, got {width}, {half}")
    box = Box.symmetric(n, half)

    def value(x):
        return np.where(box.contains(x), np.exp(-np.einsum("ij,ij->i", x, x) / (2 * width**2)), 0.0)

    axis_mass = width * math.sqrt(2 * math.pi) * erf(half / (width * math.sqrt(2)))
    marginal = truncnorm(-half / width, half / width, scale=width)
    return Density(f"bump[{width}]", value, axis_mass**n, 1.0, box, tuple(marginal.ppf for _ in range(n)))


@dataclass(frozen=True)
class DensitySnapshot:
    t: float
    grid: Grid
    values: NDArray
    provenance: Provenance
    failed: NDArray
    truncated_mass: float = 0.0
    particles: int = 0
    particle_weight: float = 0.0

    def to_frame(self) -> pd.DataFrame:
        centers = self.grid.centers
        frame = pd.DataFrame({f"c{k}": centers[:, k] for k in range(centers.shape[1])})
        frame.insert(0, "t", self.t)
        frame["value"] = self.values
        frame["failed"] = self.failed
        frame["provenance"] = str(self.provenance)
        return require_valid(frame, density_schema(centers.shape[1]), "density snapshot")

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "cells": self.grid.cells,
            "box": [self.grid.box.lower.tolist(), self.grid.box.upper.tolist()],
            "provenance": str(self.provenance),
            "failed_cells": int(self.failed.sum()),
            "truncated_mass": self.truncated_mass,
            "particles": self.particles,
        }


def transported_density(
    dmap: DiscreteMap,
    rho0: Density,
    t: float,
    max_iter: int = 50,
    tol: float = 1e-10,
) -> Callable[[PointArray], tuple[NDArray, NDArray]]:
    """z -> (rho0(T_t^-1 z) / det grad T_t(T_t^-1 z), converged) through Newton inversion."""

    def evaluate(z):
        z = np.atleast_2d(np.asarray(z, dtype=float))
        inverse = invert_t_map(dmap, t, z, max_iter, tol)
        det = np.linalg.det(t_jacobian(dmap, t, inverse.points))
        with np.errstate(divide="ignore", invalid="ignore"):
            values = rho0(inverse.points) / det
        values = np.where(inverse.converged & (det > 0), values, np.nan)
        return values, inverse.converged & (det > 0)

    return evaluate


def pushed_density(dmap: DiscreteMap, rho0: Density, t: float, max_iter: int = 50, tol: float = 1e-10) -> Density:
    """rho_t as a density closure; unconverged points evaluate to NaN."""
    evaluate = transported_density(dmap, rho0, t, max_iter, tol)
    return Density(f"{rho0.label}@t={t}", lambda z: evaluate(z)[0], rho0.mass, math.nan)


def density_closed_form(
    dmap: DiscreteMap,
    rho0: Density,
    t: float,
    grid: Grid,
    max_iter: int = 50,
    tol: float = 1e-10,
) -> DensitySnapshot:
    values, converged = transported_density(dmap, rho0, t, max_iter, tol)(grid.centers)
    failed = ~converged
    if failed.any():
        logger.warning("Closed-form density at t=%.3f: %d of %d cells failed to invert", t, failed.sum(), failed.size)
    return DensitySnapshot(t, grid, values, Provenance.CLOSED_FORM, failed)


def sample_particles(rho0: Density, count: int, seed: int = 0) -> PointArray:
    """Inverse-CDF sampling for product densities, rejection from the support box otherwise."""
    if rho0.ppf is not None:
        u = sobol_points(len(rho0.ppf), count, seed)
        return np.column_stack([ppf(u[:, k]) for k, ppf in enumerate(rho0.ppf)])

    if rho0.support is None or not np.isfinite(rho0.peak):
        raise ValueError(f"Density '{rho0.label}' needs a support box and peak for rejection sampling")
    box, n = rho0.support, rho0.support.n
    acceptance = rho0.mass / (rho0.peak * box.volume)
    draw = max(count, math.ceil(1.2 * count / max(acceptance, 1e-6)))
    while True:
        u = sobol_points(n + 1, draw, seed)
        x = box.lower + (box.upper - box.lower) * u[:, :n]
        kept = x[u[:, n] * rho0.peak <= rho0(x)]
        if len(kept) >= count:
            return kept[:count]
        draw *= 2


def density_pushforward(
    dmap: DiscreteMap,
    rho0: Density,
    t: float,
    grid: Grid,
    particles: int = 1_048_576,
    seed: int = 0,
    threads: int = 1,
) -> DensitySnapshot:
    """Histogram of rho0-distributed particles moved by T_t, scaled to a density on the grid."""
    if particles < MIN_PARTICLES:
        raise ValueError(f"Pushforward needs at least {MIN_PARTICLES} particles, got {particles}")
    dmap.require_closure("density_pushforward")
    source = sample_particles(rho0, particles, seed)
    edges = grid.edges

    def count(block: NDArray) -> NDArray:
        moved = t_map(dmap, t, source[block])
        hist, _ = np.histogramdd(moved, bins=edges)
        return hist

    blocks = np.array_split(np.arange(particles), max(1, threads))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partial = list(pool.map(count, blocks))
    else:
        partial = [count(block) for block in blocks]
    counts = np.zeros_like(partial[0])
    for hist in partial:
        counts += hist

    weight = rho0.mass / particles
    inside = float(counts.sum())
    truncated = (particles - inside) * weight
    values = counts.ravel() * weight / grid.cell_volume
    logger.info("Pushforward at t=%.3f: %d particles, truncated mass %.4e", t, particles, truncated)
    return DensitySnapshot(
        t=t,
        grid=grid,
        values=values,
        provenance=Provenance.PUSHFORWARD_HISTOGRAM,
        failed=np.zeros(values.size, dtype=bool),
        truncated_mass=truncated,
        particles=particles,
        particle_weight=weight,
    )


def holder_seminorm(
    density: Density,
    alpha: float,
    budget: int = 1024,
    n: int | None = None,
    seed: int = 0,
    chunk: int = 256,
) -> float:
    """sup |rho(x) - rho(y)| / |x - y|^alpha over all pairs of ``budget`` low-discrepancy points of B_1."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if n is None and density.support is not None:
        n = density.support.n
    if n is None:
        raise ValueError(f"Density '{density.label}' has no support box to fix the dimension")
    points = ball_points(np.zeros(n), 1.0, budget, seed)
    values = density(points)
    best = 0.0
    for start in range(0, len(points), chunk):
        block = slice(start, start + chunk)
        dist = np.linalg.norm(points[block, None, :] - points[None, :, :], axis=-1)
        diff = np.abs(values[block, None] - values[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            quotient = np.where(dist > 0, diff / dist**alpha, 0.0)
        best = max(best, float(np.nanmax(quotient)))
    return best


@dataclass(frozen=True)
class DensitySupReport:
    status: CheckStatus
    bounds: pd.DataFrame
    seminorms: tuple[float, float]
    alpha: float
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASSED

    def to_dict(self) -> dict:
        return {
            "status": str(self.status),
            "reason": self.reason,
            "alpha": self.alpha,
            "seminorms": list(self.seminorms),
            "rows": self.bounds.to_dict(orient="records"),
        }


def _histogram_slack(snapshot: DensitySnapshot, value: float) -> float:
    """Relative slack of three binomial standard deviations for a histogram cell."""
    if snapshot.provenance != Provenance.PUSHFORWARD_HISTOGRAM or value <= 0:
        return 0.0
    expected = value * snapshot.grid.cell_volume / snapshot.particle_weight
    return 3 / math.sqrt(expected)


def density_sup_check(
    rho0: Density,
    rho1: Density,
    snapshots: list[DensitySnapshot],
    beta: float,
    alpha: float = 1.0,
    seminorms: tuple[float, float] | None = None,
    energy: float | None = None,
    energy_threshold: float | None = None,
    budget: int = 1024,
) -> DensitySupReport:
    """sup_{B_beta} rho_t against (1 + [rho0])^(1 - t) (1 + [rho1])^t for every snapshot.

    The check is gated when either density is not normalised to 1 at the
    origin or when the energy exceeds the configured smallness threshold.
    """
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    if not snapshots and rho0.support is None:
        raise ValueError("density_sup_check needs at least one snapshot or a density with a bounded support")
    n = snapshots[0].grid.box.n if snapshots else rho0.support.n
    if seminorms is None:
        seminorms = (holder_seminorm(rho0, alpha, budget, n), holder_seminorm(rho1, alpha, budget, n))

    origin = np.zeros((1, n))
    normalised = all(abs(float(rho(origin)[0]) - 1.0) <= NORMALISATION_TOLERANCE for rho in (rho0, rho1))
    regime = energy is None or energy_threshold is None or energy <= energy_threshold

    rows = []
    for snapshot in snapshots:
        inside = np.linalg.norm(snapshot.grid.centers, axis=1) < beta
        values = snapshot.values[inside & ~snapshot.failed]
        sup = float(values.max()) if values.size else 0.0
        bound = (1 + seminorms[0]) ** (1 - snapshot.t) * (1 + seminorms[1]) ** snapshot.t
        allowed = bound * (1 + _histogram_slack(snapshot, sup))
        rows.append(
            {
                "t": snapshot.t,
                "provenance": str(snapshot.provenance),
                "sup": sup,
                "bound": bound,
                "margin": allowed - sup,
                "passed": sup <= allowed,
            }
        )
    table = require_valid(pd.DataFrame(rows, columns=list(SUP_CHECK_SCHEMA.columns)), SUP_CHECK_SCHEMA, "sup check")

    reason = ""
    if not normalised:
        reason = "hypothesis regime not met: densities are not normalised to 1 at the origin"
    elif not regime:
        reason = f"hypothesis regime not met: energy {energy:.4e} exceeds {energy_threshold:.4e}"
    status = classify_status(bool(table["passed"].all()), gated=bool(reason))
    return DensitySupReport(status, table, tuple(seminorms), alpha, reason)
