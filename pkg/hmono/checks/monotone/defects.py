"""The three pairwise monotonicity quantities; each is >= 0 on a monotone pair."""

import numpy as np
from numpy.typing import NDArray

from hmono.checks.cost.kernel import CostFunction, eval_h
from hmono.checks.cost.quadrature import QuadratureSpec, a_matrix_batch
from hmono.errors import DimensionMismatchError
from hmono.utils.maps import as_points


def h_defect(c: CostFunction, x, y, tx, ty) -> NDArray | float:
    """h(x - Ty) + h(y - Tx) - h(x - Tx) - h(y - Ty)."""
    x, y, tx, ty = (np.asarray(v, dtype=float) for v in (x, y, tx, ty))
    return eval_h(c, x - ty) + eval_h(c, y - tx) - eval_h(c, x - tx) - eval_h(c, y - ty)


def bilinear_defect_batch(c: CostFunction, x, y, tx, ty, quad: QuadratureSpec | None = None) -> NDArray:
    x, y, tx, ty = (as_points(v, c.n) for v in (x, y, tx, ty))
    a = a_matrix_batch(c, x, y, tx, ty, quad).value
    return np.einsum("kij,kj,ki->k", a, x - y, tx - ty)


def bilinear_defect(c: CostFunction, x, y, tx, ty, quad: QuadratureSpec | None = None) -> float:
    """<A(x, y)(x - y), Tx - Ty>."""
    return float(bilinear_defect_batch(c, x, y, tx, ty, quad)[0])


def classical_defect(a, x, y, ux, uy) -> NDArray | float:
    """(u(x) - u(y)) . (x - y) + <A(x - y), x - y>."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    x, y, ux, uy = (np.asarray(v, dtype=float) for v in (x, y, ux, uy))
    n = a.shape[0]
    for v in (x, y, ux, uy):
        if v.shape[-1:] != (n,):
            raise DimensionMismatchError(n, v.shape[-1] if v.ndim else 1)
    d = x - y
    value = np.einsum("...i,...i->...", ux - uy, d) + np.einsum("...i,ij,...j->...", d, a, d)
    return value if np.ndim(value) else float(value)
