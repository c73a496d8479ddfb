"""Discrete transport maps: stored (x, Tx) pairs with an optional analytic closure."""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from hmono.errors import ClosureAbsentError, DimensionMismatchError
from hmono.utils.numerics import ensure_finite, fd_jacobian
from hmono.utils.types import JacobianField, PointArray, VectorField

CLOSURE_AGREEMENT = 1e-12


def as_points(x, n: int | None = None) -> PointArray:
    """Coerce a vector or stack of vectors to an (N, n) float array."""
    points = np.asarray(x, dtype=float)
    if points.ndim == 0:
        points = points.reshape(1, 1)
    if points.ndim == 1:
        points = points[None, :] if n is None or points.size == n else points[:, None]
    if points.ndim != 2:
        raise ValueError(f"Expected a point or a stack of points, got shape {points.shape}")
    if n is not None and points.shape[1] != n:
        raise DimensionMismatchError(n, points.shape[1])
    return points


@dataclass(frozen=True, eq=False)
class DiscreteMap:
    sources: PointArray
    images: PointArray
    label: str
    analytic: VectorField | None = field(default=None, repr=False)
    jacobian: JacobianField | None = field(default=None, repr=False)

    def __post_init__(self):
        sources = np.atleast_2d(np.asarray(self.sources, dtype=float))
        images = np.atleast_2d(np.asarray(self.images, dtype=float))
        if sources.shape[0] == 0:
            raise ValueError(f"Map '{self.label}' is empty")
        if images.shape != sources.shape:
            raise DimensionMismatchError(sources.shape[1], images.shape[1], what="image")
        ensure_finite(sources, f"map '{self.label}' sources")
        ensure_finite(images, f"map '{self.label}' images")
        if self.analytic is not None:
            expected = np.asarray(self.analytic(sources))
            gap = np.abs(expected - images).max()
            if gap > CLOSURE_AGREEMENT * (1 + np.abs(images).max()):
                raise ValueError(f"Map '{self.label}': stored images disagree with closure by {gap:.3e}")
        object.__setattr__(self, "sources", sources)
        object.__setattr__(self, "images", images)

    @classmethod
    def from_closure(
        cls,
        label: str,
        closure: VectorField,
        points: PointArray,
        jacobian: JacobianField | None = None,
    ) -> "DiscreteMap":
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(points, np.asarray(closure(points), dtype=float), label, closure, jacobian)

    @property
    def n(self) -> int:
        return self.sources.shape[1]

    @property
    def size(self) -> int:
        return self.sources.shape[0]

    @property
    def has_closure(self) -> bool:
        return self.analytic is not None

    def require_closure(self, operation: str) -> VectorField:
        if self.analytic is None:
            raise ClosureAbsentError(self.label, operation)
        return self.analytic

    def evaluate(self, x) -> PointArray:
        closure = self.require_closure("evaluate")
        return np.asarray(closure(as_points(x, self.n)), dtype=float)

    def displacement(self, x=None) -> PointArray:
        """u = Tx - x on the stored sources, or on ``x`` through the closure."""
        if x is None:
            return self.images - self.sources
        x = as_points(x, self.n)
        return self.evaluate(x) - x

    def jacobian_at(self, x, fd_step: float = 1e-6, finite_difference: bool = False):
        closure = self.require_closure("jacobian")
        x = as_points(x, self.n)
        if self.jacobian is not None and not finite_difference:
            return np.asarray(self.jacobian(x), dtype=float).reshape(len(x), self.n, self.n)
        return fd_jacobian(closure, x, fd_step)

    def to_frame(self) -> pd.DataFrame:
        data = {f"x{k}": self.sources[:, k] for k in range(self.n)}
        data |= {f"tx{k}": self.images[:, k] for k in range(self.n)}
        return pd.DataFrame(data)
