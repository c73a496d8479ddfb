"""Velocity, density and flux of the interpolation viewed as a flow."""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from hmono.checks.interpolation.density import Density, transported_density
from hmono.checks.interpolation.tmap import invert_t_map
from hmono.errors import ConvergenceError
from hmono.utils.maps import DiscreteMap, as_points
from hmono.utils.types import PointArray

type TimeField = Callable[[PointArray, float], np.ndarray]


def velocity(dmap: DiscreteMap, t: float, x, max_iter: int = 50, tol: float = 1e-10) -> PointArray:
    """v(x, t) = (T - Id)(T_t^-1 x)."""
    closure = dmap.require_closure("velocity")
    inverse = invert_t_map(dmap, t, as_points(x, dmap.n), max_iter, tol)
    if inverse.failures:
        raise ConvergenceError(f"T_t inversion failed at {inverse.failures} point(s) for t={t}")
    return np.asarray(closure(inverse.points)) - inverse.points


@dataclass(frozen=True, eq=False)
class FlowField:
    velocity: TimeField = field(repr=False)
    density: TimeField = field(repr=False)
    label: str = "flow"

    def flux(self, x: PointArray, t: float) -> np.ndarray:
        """j = rho v."""
        return self.density(x, t)[:, None] * self.velocity(x, t)


def flow_field(dmap: DiscreteMap, rho0: Density, max_iter: int = 50, tol: float = 1e-10) -> FlowField:
    """The flow of rho0 along T_t, with rho from the closed-form change of variables."""

    def v(x, t):
        return velocity(dmap, t, x, max_iter, tol)

    def rho(x, t):
        values, converged = transported_density(dmap, rho0, t, max_iter, tol)(as_points(x, dmap.n))
        if not converged.all():
            raise ConvergenceError(f"density undefined at {(~converged).sum()} point(s) for t={t}")
        return values

    return FlowField(v, rho, dmap.label)
