"""Probes of the estimate's hypotheses: the G lower bound and the Lipschitz regime at a point."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from hmono.checks.cost.kernel import CostFunction, eval_h
from hmono.checks.linfty.bounds import statement_threshold
from hmono.checks.linfty.constants import estimate_constants
from hmono.checks.linfty.mass import Ball, empirical_sup, lp_mass
from hmono.checks.linfty.models import LIPSCHITZ_SCHEMA, PROBE_SCHEMA
from hmono.utils.maps import DiscreteMap
from hmono.utils.validators import require_valid

logger = logging.getLogger(__name__)

GROWTH_FACTOR = 1.5


def default_delta_grid() -> np.ndarray:
    return np.linspace(1e-3, 1.0, 1000)


@dataclass(frozen=True)
class ProbeResult:
    delta0: float
    threshold: float
    table: pd.DataFrame

    def to_dict(self) -> dict:
        return {"delta0": self.delta0, "threshold": self.threshold, "grid_points": len(self.table)}


def probe_ratio(c: CostFunction, u, deltas) -> np.ndarray:
    """-G(delta u, u) / (delta |u|^p) for each delta."""
    u = np.asarray(u, dtype=float).reshape(c.n)
    deltas = np.asarray(deltas, dtype=float)
    scaled = deltas[:, None] * u
    numerator = eval_h(c, scaled) + eval_h(c, u) - eval_h(c, scaled - u)
    return numerator / (deltas * np.linalg.norm(u) ** c.p)


def probe_lower_bound(c: CostFunction, u, delta_grid=None) -> ProbeResult:
    """Largest grid delta such that the ratio stays at least m/2 on every grid point up to it."""
    u = np.asarray(u, dtype=float).reshape(c.n)
    if not np.any(u):
        raise ValueError("probe_lower_bound needs a nonzero displacement u")
    grid = np.sort(np.asarray(default_delta_grid() if delta_grid is None else delta_grid, dtype=float))
    if grid.size == 0 or grid[0] <= 0 or grid[-1] > 1:
        raise ValueError("delta grid must be nonempty and lie in (0, 1]")

    threshold = c.extremes.m / 2
    ratios = probe_ratio(c, u, grid)
    holds = ratios >= threshold
    failing = np.flatnonzero(~holds)
    match failing.size:
        case 0:
            delta0 = float(grid[-1])
        case _ if failing[0] == 0:
            logger.warning("Probe ratio is below m/2 already at delta=%.3e", grid[0])
            delta0 = 0.0
        case _:
            delta0 = float(grid[failing[0] - 1])

    table = pd.DataFrame({"delta": grid, "ratio": ratios, "threshold": threshold, "holds": holds})
    return ProbeResult(delta0, threshold, require_valid(table, PROBE_SCHEMA, "probe ratio table"))


@dataclass(frozen=True)
class LipschitzDiagnostic:
    status: str
    threshold: float
    table: pd.DataFrame

    def to_dict(self) -> dict:
        return {"status": self.status, "threshold": self.threshold, "rows": self.table.to_dict(orient="list")}


def lipschitz_diagnostic(
    dmap: DiscreteMap,
    c: CostFunction,
    x0,
    radii,
    budget: int = 100_000,
) -> LipschitzDiagnostic:
    """R^-p avg_{B_R(x0)} |u|^p and sup_{B_R/2} |u| / R over shrinking radii.

    The status reads "hypothesis fails" when the averaged quantity grows as
    R decreases, "lipschitz regime" when its last value is below the small
    branch threshold at beta = 1/2, and "bounded" otherwise.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any(radii <= 0):
        raise ValueError(f"radii must be positive, got {radii.tolist()}")
    if np.any(np.diff(radii) > 0):
        raise ValueError("radii must be given in descending order")
    dmap.require_closure("lipschitz_diagnostic")

    consts = estimate_constants(c)
    center = np.asarray(x0, dtype=float).reshape(dmap.n)
    rows = []
    for radius in radii:
        ball = Ball(center, float(radius))
        delta = lp_mass(dmap, c, ball, budget).value
        scaled, threshold = statement_threshold(delta, float(radius), 0.5, consts)
        sup, _ = empirical_sup(dmap, ball.shrink(0.5), budget)
        rows.append({"radius": float(radius), "scaled_average": scaled, "quotient": sup / radius})

    table = require_valid(pd.DataFrame(rows), LIPSCHITZ_SCHEMA, "Lipschitz diagnostic")
    first, last = table["scaled_average"].iloc[0], table["scaled_average"].iloc[-1]
    match (last > GROWTH_FACTOR * first, last <= threshold):
        case (True, _):
            status = "hypothesis fails"
        case (False, True):
            status = "lipschitz regime"
        case _:
            status = "bounded"
    logger.info("Lipschitz diagnostic at %s: %s", center.tolist(), status)
    return LipschitzDiagnostic(status, threshold, table)
