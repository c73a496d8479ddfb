"""Determinant log-concavity along the interpolation."""

import numpy as np

from hmono.errors import UnsupportedInputError
from hmono.utils.maps import DiscreteMap, as_points


def _smallest_eigenvalue(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((matrix + matrix.T) / 2)[0])


def det_logconcavity_residual(a, b, t: float) -> float:
    """det((1 - t) A + t B) - det(A)^(1 - t) det(B)^t for symmetric positive-definite A, B."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"A and B must be square of equal shape, got {a.shape} and {b.shape}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    for name, matrix in (("A", a), ("B", b)):
        if _smallest_eigenvalue(matrix) <= 0:
            raise ValueError(f"{name} is not positive definite")

    mixed = np.linalg.det((1 - t) * a + t * b)
    return float(mixed - np.linalg.det(a) ** (1 - t) * np.linalg.det(b) ** t)


def det_interp_bound_check(dmap: DiscreteMap, x, t: float, fd_step: float = 1e-6) -> float:
    """det grad T_t(x) - (det grad T(x))^t with the Jacobian taken by central differences."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    x = as_points(x, dmap.n)
    if len(x) != 1:
        raise ValueError(f"det_interp_bound_check takes a single point, got {len(x)}")
    jac = dmap.jacobian_at(x, fd_step, finite_difference=True)[0]
    if _smallest_eigenvalue(jac) <= 0:
        raise UnsupportedInputError(f"Jacobian of '{dmap.label}' at {x[0].tolist()} is not positive definite")
    interpolated = t * jac + (1 - t) * np.eye(dmap.n)
    return float(np.linalg.det(interpolated) - np.linalg.det(jac) ** t)
