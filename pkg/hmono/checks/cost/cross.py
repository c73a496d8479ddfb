import numpy as np

from hmono.checks.cost.kernel import CostFamily, CostFunction, grad_h
from hmono.errors import UnsupportedInputError
from hmono.utils.maps import as_points


def cross_det_residual(c: CostFunction, x, y, step: float | None = None) -> float:
    """|det D_xy c(x, y) - (p-1)(-p|x-y|^(p-2))^n| with D_xy c from central differences of grad h."""
    if c.family != CostFamily.ISOTROPIC:
        raise UnsupportedInputError(f"Cross-derivative determinant needs an isotropic cost, got {c.family}")
    x = as_points(x, c.n)[0]
    y = as_points(y, c.n)[0]
    d = x - y
    r = float(np.linalg.norm(d))
    if r == 0:
        raise UnsupportedInputError("Cross-derivative determinant needs x != y")

    step = step if step is not None else 1e-5 * max(1.0, r)
    cross = np.empty((c.n, c.n))
    for j in range(c.n):
        e = np.zeros(c.n)
        e[j] = step
        # d/dy_j of grad_x h(x - y)
        cross[:, j] = (grad_h(c, d - e) - grad_h(c, d + e)) / (2 * step)

    expected = (c.p - 1) * (-c.p * r ** (c.p - 2)) ** c.n
    return float(abs(np.linalg.det(cross) - expected))
