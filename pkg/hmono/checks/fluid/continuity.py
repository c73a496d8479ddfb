"""Continuity equation residual d_t rho + div(rho v) by central differences."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from hmono.checks.fluid.flow import FlowField
from hmono.utils.maps import as_points

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContinuityReport:
    max_residual: float
    table: pd.DataFrame

    def to_dict(self) -> dict:
        return {"max_residual": self.max_residual, "points": len(self.table)}


def continuity_residual(field: FlowField, points, t_grid, fd_step: float = 1e-3) -> ContinuityReport:
    """max over points x t_grid of |d_t rho + div j|; every t must leave room for the step on both sides."""
    points = as_points(points)
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < fd_step) or np.any(t_grid > 1 - fd_step):
        raise ValueError(f"t grid must lie in [{fd_step}, {1 - fd_step}] for central differences")
    n = points.shape[1]

    rows = []
    for t in t_grid:
        d_rho = (field.density(points, t + fd_step) - field.density(points, t - fd_step)) / (2 * fd_step)
        div = np.zeros(len(points))
        for k in range(n):
            offset = np.zeros(n)
            offset[k] = fd_step
            div += (field.flux(points + offset, t)[:, k] - field.flux(points - offset, t)[:, k]) / (2 * fd_step)
        residual = np.abs(d_rho + div)
        rows.append(pd.DataFrame({"t": t, "point": np.arange(len(points)), "residual": residual}))

    table = pd.concat(rows, ignore_index=True)
    worst = float(table["residual"].max())
    logger.info("Continuity residual for '%s': max %.3e over %d evaluations", field.label, worst, len(table))
    return ContinuityReport(worst, table)
