"""Ball inclusion along the interpolation: T_t^-1(B_beta) inside B_beta_bar."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from hmono.checks.cost.kernel import CostFunction
from hmono.checks.interpolation.models import violations_schema
from hmono.checks.linfty.mass import Ball, displacement_integral
from hmono.utils.maps import DiscreteMap
from hmono.utils.numerics import unit_ball_volume
from hmono.utils.sampling import ball_points
from hmono.utils.validators import require_valid

logger = logging.getLogger(__name__)

DEFAULT_T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class InterpolationResult:
    t_grid: tuple[float, ...]
    beta: float
    beta_bar: float
    violations: pd.DataFrame
    energy: float
    energy_from_samples: bool
    samples: int

    @property
    def holds(self) -> bool:
        return self.violations.empty

    def to_dict(self) -> dict:
        return {
            "t_grid": list(self.t_grid),
            "beta": self.beta,
            "beta_bar": self.beta_bar,
            "violation_count": len(self.violations),
            "violations": self.violations.head(20).to_dict(orient="records"),
            "energy": self.energy,
            "energy_from_samples": self.energy_from_samples,
            "samples": self.samples,
            "holds": self.holds,
        }


def unit_energy(dmap: DiscreteMap, c: CostFunction, budget: int) -> tuple[float, bool]:
    """E = int_{B_1} |Tx - x|^p, through the closure or, without one, from the stored sources in B_1."""
    if dmap.has_closure:
        return displacement_integral(dmap.analytic, Ball.unit(dmap.n), budget, c.p).value, False
    inside = np.linalg.norm(dmap.sources, axis=1) <= 1.0
    if not inside.any():
        return 0.0, True
    moved = np.linalg.norm(dmap.displacement()[inside], axis=1) ** c.p
    return float(unit_ball_volume(dmap.n) * moved.mean()), True


def inclusion_check(
    dmap: DiscreteMap,
    c: CostFunction,
    beta: float,
    beta_bar: float,
    t_grid=DEFAULT_T_GRID,
    budget: int = 100_000,
    seed: int = 0,
) -> InterpolationResult:
    """Every x in B_1 with |x| >= beta_bar whose image T_t x lands in B_beta, for each t of the grid."""
    if not 0 < beta < beta_bar < 1:
        raise ValueError(f"need 0 < beta < beta_bar < 1, got beta={beta}, beta_bar={beta_bar}")
    t_grid = tuple(float(t) for t in t_grid)
    if any(not 0.0 <= t <= 1.0 for t in t_grid):
        raise ValueError(f"t grid must lie in [0, 1], got {list(t_grid)}")

    n = dmap.n
    stored = np.linalg.norm(dmap.sources, axis=1) <= 1.0
    points, images = dmap.sources[stored], dmap.images[stored]
    if dmap.has_closure:
        sampled = ball_points(np.zeros(n), 1.0, budget, seed)
        points = np.vstack([sampled, points])
        images = np.vstack([np.asarray(dmap.analytic(sampled)), images])

    outer = np.linalg.norm(points, axis=1) >= beta_bar
    frames = []
    for t in t_grid:
        moved = t * images[outer] + (1 - t) * points[outer]
        norms = np.linalg.norm(moved, axis=1)
        hit = norms < beta
        if hit.any():
            frame = pd.DataFrame(points[outer][hit], columns=[f"x{k}" for k in range(n)])
            frame.insert(0, "t", t)
            frame["norm_x"] = np.linalg.norm(points[outer][hit], axis=1)
            frame["norm_tx"] = norms[hit]
            frames.append(frame)

    columns = ["t", *(f"x{k}" for k in range(n)), "norm_x", "norm_tx"]
    violations = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=columns, dtype=float)
    violations = require_valid(violations, violations_schema(n), "inclusion violations")
    energy, from_samples = unit_energy(dmap, c, budget)

    logger.info(
        "Inclusion check for '%s' (beta=%.2f, beta_bar=%.2f): %d violations over %d points, E=%.4e",
        dmap.label, beta, beta_bar, len(violations), len(points), energy,
    )
    return InterpolationResult(t_grid, beta, beta_bar, violations, energy, from_samples, len(points))
