"""Small numerical kernels shared across check suites."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import gamma

from hmono.errors import NonFiniteError
from hmono.utils.types import JacobianField, PointArray, VectorField

logger = logging.getLogger(__name__)


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    if n < 1:
        raise ValueError(f"Dimension must be positive, got {n}")
    return float(math.pi ** (n / 2) / gamma(n / 2 + 1))


def sphere_area(n: int) -> float:
    return n * unit_ball_volume(n)


def spectral_norm(matrix: NDArray) -> float:
    return float(np.linalg.norm(np.atleast_2d(matrix), 2))


def ensure_finite(values: NDArray, what: str) -> NDArray:
    if not np.all(np.isfinite(values)):
        bad = int(np.size(values) - np.count_nonzero(np.isfinite(values)))
        raise NonFiniteError(f"{what}: {bad} non-finite value(s)")
    return values


def fd_jacobian(field: VectorField, points: PointArray, step: float = 1e-6) -> NDArray:
    """Central-difference Jacobian, J[k, i, j] = d field_i / d x_j at points[k]."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    count, n = points.shape
    jac = np.empty((count, n, n))
    for j in range(n):
        offset = np.zeros(n)
        offset[j] = step
        forward = np.asarray(field(points + offset)).reshape(count, n)
        backward = np.asarray(field(points - offset)).reshape(count, n)
        jac[:, :, j] = (forward - backward) / (2 * step)
    return jac


def fd_laplacian(scalar, points: PointArray, step: float = 1e-3) -> NDArray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = points.shape[1]
    centre = np.asarray(scalar(points))
    total = np.zeros(points.shape[0])
    for j in range(n):
        offset = np.zeros(n)
        offset[j] = step
        total += np.asarray(scalar(points + offset)) - 2 * centre + np.asarray(scalar(points - offset))
    return total / step**2


@dataclass(frozen=True)
class InversionResult:
    points: PointArray
    converged: NDArray[np.bool_]
    residual: NDArray
    iterations: int

    @property
    def failures(self) -> int:
        return int(np.count_nonzero(~self.converged))


def interpolate_points(field: VectorField, t: float, x: PointArray) -> PointArray:
    return t * np.asarray(field(x)) + (1 - t) * x


def invert_interpolation(
    field: VectorField,
    jacobian: JacobianField | None,
    t: float,
    targets: PointArray,
    max_iter: int = 50,
    tol: float = 1e-10,
    fd_step: float = 1e-6,
) -> InversionResult:
    """Solve t*T(x) + (1-t)*x = z for every row z by damped Newton iteration.

    The iteration starts from x = z. Rows that do not reach ``tol`` within
    ``max_iter`` steps are reported as not converged; their last iterate is
    kept so callers can decide how to surface the failure.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    count, n = targets.shape
    if t == 0.0:
        return InversionResult(targets.copy(), np.ones(count, dtype=bool), np.zeros(count), 0)

    eye = np.eye(n)
    x = targets.copy()

    res = interpolate_points(field, t, x) - targets
    norm = np.linalg.norm(res, axis=1)
    active = np.flatnonzero(norm > tol)
    iteration = 0

    while active.size and iteration < max_iter:
        iteration += 1
        xa = x[active]
        jac_t = jacobian(xa) if jacobian is not None else fd_jacobian(field, xa, fd_step)
        system = t * np.asarray(jac_t).reshape(len(active), n, n) + (1 - t) * eye
        try:
            step = np.linalg.solve(system, res[active][..., None])[..., 0]
        except np.linalg.LinAlgError:
            logger.warning("Singular interpolation Jacobian at iteration %d", iteration)
            break

        damping = np.ones(len(active))
        trial = xa - step
        trial_res = interpolate_points(field, t, trial) - targets[active]
        trial_norm = np.linalg.norm(trial_res, axis=1)
        for _ in range(8):
            worse = trial_norm > norm[active]
            if not worse.any():
                break
            damping[worse] *= 0.5
            trial[worse] = xa[worse] - damping[worse, None] * step[worse]
            trial_res[worse] = interpolate_points(field, t, trial[worse]) - targets[active[worse]]
            trial_norm[worse] = np.linalg.norm(trial_res[worse], axis=1)

        x[active] = trial
        res[active] = trial_res
        norm[active] = trial_norm
        active = active[trial_norm > tol]
        logger.debug("Newton iteration %d: %d points active", iteration, active.size)

    converged = np.isfinite(norm) & (norm <= tol)
    if not converged.all():
        logger.warning("Interpolation inverse did not converge at %d of %d points", (~converged).sum(), count)
    return InversionResult(x, converged, norm, iteration)
