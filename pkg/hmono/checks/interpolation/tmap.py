"""Displacement interpolation T_t x = t Tx + (1 - t) x and its inverse."""

import numpy as np

from hmono.utils.maps import DiscreteMap, as_points
from hmono.utils.numerics import InversionResult, interpolate_points, invert_interpolation
from hmono.utils.types import PointArray


def _check_t(t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return float(t)


def t_map(dmap: DiscreteMap, t: float, x=None) -> PointArray:
    """T_t on the stored sources, or on ``x`` through the closure."""
    t = _check_t(t)
    if x is None:
        return t * dmap.images + (1 - t) * dmap.sources
    closure = dmap.require_closure("t_map")
    return interpolate_points(closure, t, as_points(x, dmap.n))


def invert_t_map(
    dmap: DiscreteMap,
    t: float,
    z,
    max_iter: int = 50,
    tol: float = 1e-10,
    fd_step: float = 1e-6,
) -> InversionResult:
    t = _check_t(t)
    closure = dmap.require_closure("invert_t_map")
    return invert_interpolation(closure, dmap.jacobian, t, as_points(z, dmap.n), max_iter, tol, fd_step)


def t_jacobian(dmap: DiscreteMap, t: float, x, fd_step: float = 1e-6) -> np.ndarray:
    """grad T_t = t grad T + (1 - t) I at each row of ``x``."""
    t = _check_t(t)
    jac = dmap.jacobian_at(x, fd_step)
    return t * jac + (1 - t) * np.eye(dmap.n)
