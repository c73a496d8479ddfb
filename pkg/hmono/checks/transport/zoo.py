"""Analytic test maps with closed-form Jacobians."""

from dataclasses import dataclass

import numpy as np

from hmono.utils.maps import DiscreteMap
from hmono.utils.sampling import ball_points
from hmono.utils.types import JacobianField, VectorField


@dataclass(frozen=True)
class ZooEntry:
    description: str
    monotone: bool
    one_dimensional: bool = False


ZOO = {
    "identity": ZooEntry("Tx = x", monotone=True),
    "translation": ZooEntry("Tx = x + c (param shift)", monotone=True),
    "dilation": ZooEntry("Tx = a x, a > 0 (param scale)", monotone=True),
    "gradient_quartic": ZooEntry("Tx = |x|^2 x, the gradient of |x|^4 / 4", monotone=True),
    "piecewise_linear": ZooEntry("nondecreasing piecewise-linear map (params knots, values)", True, True),
    "reflection": ZooEntry("Tx = -x, negative control", monotone=False),
}


def _eye(n: int):
    return lambda x: np.broadcast_to(np.eye(n), (len(x), n, n)).copy()


def _piecewise(knots, values) -> tuple[VectorField, JacobianField]:
    knots = np.asarray(knots, dtype=float)
    values = np.asarray(values, dtype=float)
    if knots.ndim != 1 or knots.shape != values.shape or len(knots) < 2:
        raise ValueError("piecewise_linear needs matching knots and values with at least two entries")
    if np.any(np.diff(knots) <= 0):
        raise ValueError(f"piecewise_linear knots must increase, got {knots.tolist()}")
    slopes = np.diff(values) / np.diff(knots)
    if np.any(slopes < 0):
        raise ValueError(f"piecewise_linear values must be nondecreasing, got {values.tolist()}")

    def segment(x):
        return np.clip(np.searchsorted(knots, x[:, 0], side="right") - 1, 0, len(slopes) - 1)

    def closure(x):
        k = segment(x)
        return (values[k] + slopes[k] * (x[:, 0] - knots[k]))[:, None]

    def jacobian(x):
        return slopes[segment(x)][:, None, None]

    return closure, jacobian


def zoo_closure(name: str, n: int, params: dict | None = None) -> tuple[VectorField, JacobianField]:
    params = params or {}
    match name:
        case "identity":
            return (lambda x: np.array(x, dtype=float)), _eye(n)
        case "translation":
            shift = np.asarray(params.get("shift", [0.1] + [0.0] * (n - 1)), dtype=float)
            if shift.shape != (n,):
                raise ValueError(f"translation shift must have {n} entries, got {shift.tolist()}")
            return (lambda x: x + shift), _eye(n)
        case "dilation":
            scale = float(params.get("scale", 2.0))
            if scale <= 0:
                raise ValueError(f"dilation scale must be positive, got {scale}")
            return (lambda x: scale * x), (lambda x: scale * _eye(n)(x))
        case "gradient_quartic":

            def jacobian(x):
                sq = np.einsum("ki,ki->k", x, x)
                return sq[:, None, None] * np.eye(n) + 2 * np.einsum("ki,kj->kij", x, x)

            return (lambda x: np.einsum("ki,ki->k", x, x)[:, None] * x), jacobian
        case "piecewise_linear":
            if n != 1:
                raise ValueError(f"piecewise_linear is one-dimensional, got n={n}")
            return _piecewise(params.get("knots", [-1.0, 0.0, 1.0]), params.get("values", [-0.5, 0.0, 1.0]))
        case "reflection":
            return (lambda x: -np.asarray(x, dtype=float)), (lambda x: -_eye(n)(x))
        case other:
            raise ValueError(f"Unknown zoo map: {other}")


def analytic_zoo(
    name: str,
    n: int,
    params: dict | None = None,
    points=None,
    count: int = 256,
    seed: int = 0,
) -> DiscreteMap:
    """A zoo map sampled on ``points``, or on ``count`` low-discrepancy points of the unit ball."""
    closure, jacobian = zoo_closure(name, n, params)
    if points is None:
        points = ball_points(np.zeros(n), 1.0, count, seed)
    return DiscreteMap.from_closure(name, closure, points, jacobian)
