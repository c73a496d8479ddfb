"""Homogeneous costs h and their derivatives.

Every evaluator accepts a single n-vector or an (..., n) stack and returns
values with the leading shape preserved. Two families are built in:
``h(x) = |x|^p`` and ``h(x) = (sum w_i x_i^2)^(p/2)``. A custom family takes
user evaluators with the same calling convention.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray

from hmono.errors import DimensionMismatchError, UnsupportedInputError
from hmono.utils.numerics import ensure_finite

if TYPE_CHECKING:
    from hmono.checks.cost.extremes import SphereExtremes


class CostFamily(StrEnum):
    ISOTROPIC = "isotropic"
    WEIGHTED = "weighted"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CostEvaluators:
    """User-supplied evaluators for a custom homogeneous cost."""

    h: Callable[[NDArray], NDArray]
    grad: Callable[[NDArray], NDArray]
    hess: Callable[[NDArray], NDArray]


@dataclass(frozen=True, eq=False)
class CostFunction:
    n: int
    p: float
    family: CostFamily = CostFamily.ISOTROPIC
    weights: tuple[float, ...] | None = None
    custom: CostEvaluators | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Cost dimension must be positive, got {self.n}")
        if not self.p >= 2:
            raise UnsupportedInputError(f"Costs with p < 2 are not supported, got p={self.p}")
        object.__setattr__(self, "family", CostFamily(self.family))
        match self.family:
            case CostFamily.WEIGHTED:
                if self.weights is None or len(self.weights) != self.n:
                    raise ValueError(f"Weighted cost needs {self.n} weights, got {self.weights}")
                if min(self.weights) <= 0:
                    raise ValueError(f"Cost weights must be positive, got {self.weights}")
                object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
            case CostFamily.CUSTOM if self.custom is None:
                raise ValueError("Custom cost needs evaluators")
            case CostFamily.ISOTROPIC if self.weights is not None:
                raise ValueError("Isotropic cost takes no weights")

    @cached_property
    def extremes(self) -> "SphereExtremes":
        from hmono.checks.cost.extremes import sphere_extremes

        return sphere_extremes(self)

    @cached_property
    def weight_array(self) -> NDArray:
        return np.asarray(self.weights if self.weights is not None else np.ones(self.n))

    def to_dict(self) -> dict:
        payload = {"family": str(self.family), "n": self.n, "p": self.p}
        if self.weights is not None:
            payload["weights"] = list(self.weights)
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "CostFunction":
        match payload:
            case {"family": "isotropic", "n": n, "p": p}:
                return cls(int(n), float(p))
            case {"family": "weighted", "n": n, "p": p, "weights": weights}:
                return cls(int(n), float(p), CostFamily.WEIGHTED, tuple(weights))
            case other:
                raise ValueError(f"Unrecognised cost specification: {other}")


def build_cost(n: int, p: float, family: str = "isotropic", weights=None) -> CostFunction:
    """Construct a cost and cache its sphere extremes eagerly."""
    cost = CostFunction(n, p, CostFamily(family), None if weights is None else tuple(weights))
    _ = cost.extremes
    return cost


def _check(c: CostFunction, x) -> NDArray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 and c.n == 1:
        x = x.reshape(1)
    if x.shape[-1:] != (c.n,):
        raise DimensionMismatchError(c.n, x.shape[-1] if x.ndim else 1)
    return ensure_finite(x, "cost argument")


def _quadratic_form(c: CostFunction, x: NDArray) -> NDArray:
    return np.einsum("...i,i,...i->...", x, c.weight_array, x)


def eval_h(c: CostFunction, x) -> NDArray | float:
    x = _check(c, x)
    match c.family:
        case CostFamily.CUSTOM:
            value = np.asarray(c.custom.h(x))
        case _:
            value = _quadratic_form(c, x) ** (c.p / 2)
    return value if value.ndim else float(value)


def grad_h(c: CostFunction, x) -> NDArray:
    x = _check(c, x)
    match c.family:
        case CostFamily.CUSTOM:
            return np.asarray(c.custom.grad(x))
        case _:
            q = _quadratic_form(c, x)
            return (c.p * q ** (c.p / 2 - 1))[..., None] * (c.weight_array * x)


def hess_h(c: CostFunction, x) -> NDArray:
    x = _check(c, x)
    if c.family == CostFamily.CUSTOM:
        return np.asarray(c.custom.hess(x))

    w = c.weight_array
    q = _quadratic_form(c, x)
    wx = w * x
    safe_q = np.where(q > 0, q, 1.0)
    radial = np.where(q > 0, (c.p - 2) / safe_q, 0.0)
    outer = np.einsum("...i,...j->...ij", wx, wx) * radial[..., None, None]
    scale = c.p * q ** (c.p / 2 - 1)
    return scale[..., None, None] * (np.diag(w) + outer)


def laplacian_h(c: CostFunction, x) -> NDArray | float:
    value = np.trace(hess_h(c, x), axis1=-2, axis2=-1)
    return value if np.ndim(value) else float(value)


def G(c: CostFunction, a, b) -> NDArray | float:
    """G(a, b) = h(a - b) - h(a) - h(b)."""
    a = _check(c, a)
    b = _check(c, b)
    return eval_h(c, a - b) - eval_h(c, a) - eval_h(c, b)
