"""Adaptive tensor Gauss-Legendre quadrature on the unit square, and the A / Phi integrals.

A(x, y) = int_0^1 int_0^1 D^2 h(z(s, t)) ds dt and Phi(x, y) = int int |z(s, t)|^(p-2) ds dt
with z(s, t) = y - Ty + s (Ty - Tx) + t (x - y).
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from hmono.checks.cost.kernel import CostFunction, hess_h
from hmono.utils.maps import as_points
from hmono.utils.numerics import ensure_finite

logger = logging.getLogger(__name__)

type SquareIntegrand = Callable[[NDArray, NDArray, NDArray], NDArray]


@dataclass(frozen=True)
class QuadratureSpec:
    order: int = 16
    tolerance: float = 1e-9
    floor: float = 1e-15
    max_depth: int = 20
    adaptive: bool = True

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"Quadrature order must be at least 2, got {self.order}")
        if self.tolerance <= 0 or self.floor < 0:
            raise ValueError(f"Quadrature tolerances must be positive, got {self.tolerance}, {self.floor}")
        if self.max_depth < 1:
            raise ValueError(f"Quadrature depth must be positive, got {self.max_depth}")

    @classmethod
    def from_settings(cls, settings) -> "QuadratureSpec":
        q = settings.quadrature
        return cls(order=q.order, tolerance=q.tolerance, floor=q.floor, max_depth=q.max_depth)


@dataclass(frozen=True)
class QuadratureResult:
    value: NDArray
    error: float
    cells: int


def _nodes(order: int) -> tuple[NDArray, NDArray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1) / 2, w / 2


CELL_CHUNK = 2048


def _cell_estimates(integrand: SquareIntegrand, spec: QuadratureSpec, idx, s0, s1, t0, t1) -> NDArray:
    x, w = _nodes(spec.order)
    weights = np.outer(w, w).ravel()
    shape = (spec.order, spec.order)
    pieces = []
    for start in range(0, len(idx), CELL_CHUNK):
        part = slice(start, start + CELL_CHUNK)
        k = len(idx[part])
        hs, ht = s1[part] - s0[part], t1[part] - t0[part]
        s = np.broadcast_to(s0[part, None, None] + hs[:, None, None] * x[None, :, None], (k, *shape))
        t = np.broadcast_to(t0[part, None, None] + ht[:, None, None] * x[None, None, :], (k, *shape))
        values = integrand(idx[part], s.reshape(k, -1), t.reshape(k, -1))
        estimate = np.tensordot(weights, np.moveaxis(values, 1, 0), axes=1)
        pieces.append(estimate * (hs * ht).reshape((-1,) + (1,) * (estimate.ndim - 1)))
    return np.concatenate(pieces)


def integrate_unit_square(integrand: SquareIntegrand, items: int, spec: QuadratureSpec) -> tuple[NDArray, NDArray]:
    """Integrate ``items`` independent integrands over [0,1]^2.

    ``integrand(idx, s, t)`` receives item indices (K,) and node coordinates
    (K, Q) and returns values of shape (K, Q, *shape). Each cell is compared
    with the sum over its four children; a cell is accepted when the two
    agree to ``tolerance * side`` (or to the absolute ``floor``), otherwise
    its children are refined further.
    """
    idx = np.arange(items)
    s0, s1 = np.zeros(items), np.ones(items)
    t0, t1 = np.zeros(items), np.ones(items)
    coarse = _cell_estimates(integrand, spec, idx, s0, s1, t0, t1)
    total = np.zeros_like(coarse)
    errors = np.zeros(items)
    depth = 0
    max_depth = spec.max_depth if spec.adaptive else 1

    while idx.size:
        depth += 1
        sm, tm = (s0 + s1) / 2, (t0 + t1) / 2
        child_idx = np.repeat(idx, 4)
        cs0 = np.stack([s0, sm, s0, sm], axis=1).ravel()
        cs1 = np.stack([sm, s1, sm, s1], axis=1).ravel()
        ct0 = np.stack([t0, t0, tm, tm], axis=1).ravel()
        ct1 = np.stack([tm, tm, t1, t1], axis=1).ravel()
        children = _cell_estimates(integrand, spec, child_idx, cs0, cs1, ct0, ct1)
        fine = children.reshape((len(idx), 4) + children.shape[1:]).sum(axis=1)

        diff = np.abs(fine - coarse).reshape(len(idx), -1).max(axis=1)
        side = s1 - s0
        accepted = diff <= np.maximum(spec.tolerance * side, spec.floor)
        done = accepted | (depth >= max_depth)
        if spec.adaptive and np.any(~accepted & done):
            logger.warning("Quadrature hit depth cap %d on %d cells", max_depth, np.count_nonzero(~accepted & done))

        np.add.at(total, idx[done], fine[done])
        np.add.at(errors, idx[done], diff[done])

        keep = np.repeat(~done, 4)
        idx = child_idx[keep]
        s0, s1, t0, t1 = cs0[keep], cs1[keep], ct0[keep], ct1[keep]
        coarse = children[keep]
        logger.debug("Quadrature depth %d: %d cells open", depth, idx.size)

    return ensure_finite(total, "quadrature value"), errors


def _arguments(c: CostFunction, x, y, tx, ty) -> tuple[NDArray, NDArray, NDArray]:
    x, y, tx, ty = (as_points(v, c.n) for v in (x, y, tx, ty))
    base = y - ty
    return base, ty - tx, x - y


def _z(base, ds, dt, idx, s, t) -> NDArray:
    return base[idx][:, None, :] + s[..., None] * ds[idx][:, None, :] + t[..., None] * dt[idx][:, None, :]


def a_matrix_batch(c: CostFunction, x, y, tx, ty, quad: QuadratureSpec | None = None) -> QuadratureResult:
    quad = quad or QuadratureSpec()
    base, ds, dt = _arguments(c, x, y, tx, ty)
    values, errors = integrate_unit_square(
        lambda idx, s, t: hess_h(c, _z(base, ds, dt, idx, s, t)), len(base), quad
    )
    return QuadratureResult(values, float(errors.max()), len(base))


def phi_batch(c: CostFunction, x, y, tx, ty, quad: QuadratureSpec | None = None) -> QuadratureResult:
    quad = quad or QuadratureSpec()
    base, ds, dt = _arguments(c, x, y, tx, ty)
    values, errors = integrate_unit_square(
        lambda idx, s, t: np.linalg.norm(_z(base, ds, dt, idx, s, t), axis=-1) ** (c.p - 2), len(base), quad
    )
    return QuadratureResult(values, float(errors.max()), len(base))


def a_matrix(c: CostFunction, x, y, tx, ty, quad: QuadratureSpec | None = None) -> QuadratureResult:
    """The symmetric matrix A(x, y) for a single tuple, with its quadrature error estimate."""
    result = a_matrix_batch(c, x, y, tx, ty, quad)
    return QuadratureResult(result.value[0], result.error, 1)


def phi(c: CostFunction, x, y, tx, ty, quad: QuadratureSpec | None = None) -> QuadratureResult:
    result = phi_batch(c, x, y, tx, ty, quad)
    return QuadratureResult(float(result.value[0]), result.error, 1)
