"""Fundamental solution of the Laplacian and test functions with known Laplacians."""

from dataclasses import dataclass, field

import numpy as np

from hmono.errors import UnsupportedInputError
from hmono.utils.numerics import fd_laplacian, unit_ball_volume
from hmono.utils.sampling import ball_points
from hmono.utils.types import ScalarField


def gamma_constant(n: int) -> float:
    """1 / (n omega_n (2 - n)), the coefficient of |x|^(2-n)."""
    if n < 3:
        raise UnsupportedInputError(f"Fundamental solution is implemented for n >= 3, got n={n}")
    return 1.0 / (n * unit_ball_volume(n) * (2 - n))


def gamma(n: int, x):
    x = np.asarray(x, dtype=float)
    kappa = gamma_constant(n)
    norm = np.linalg.norm(x, axis=-1)
    if np.any(norm == 0):
        raise ValueError("Fundamental solution is singular at x = 0")
    value = kappa * norm ** (2 - n)
    return value if np.ndim(value) else float(value)


@dataclass(frozen=True, eq=False)
class TestFunction:
    __test__ = False

    label: str
    value: ScalarField = field(repr=False)
    laplacian: ScalarField = field(repr=False)


def quadratic(n: int) -> TestFunction:
    return TestFunction(
        "quadratic",
        lambda x: np.einsum("...i,...i->...", x, x),
        lambda x: np.full(x.shape[:-1], 2.0 * n),
    )


def harmonic(n: int) -> TestFunction:
    return TestFunction("harmonic", lambda x: x[..., 0], lambda x: np.zeros(x.shape[:-1]))


def gaussian(n: int) -> TestFunction:
    def value(x):
        return np.exp(-np.einsum("...i,...i->...", x, x))

    def laplacian(x):
        sq = np.einsum("...i,...i->...", x, x)
        return (4 * sq - 2 * n) * np.exp(-sq)

    return TestFunction("gaussian", value, laplacian)


def named_function(name: str, n: int) -> TestFunction:
    match name:
        case "quadratic":
            return quadratic(n)
        case "harmonic":
            return harmonic(n)
        case "gaussian":
            return gaussian(n)
        case other:
            raise ValueError(f"Unknown test function: {other}")


def check_laplacian(f: TestFunction, n: int, probes: int = 32, step: float = 1e-3, seed: int = 0) -> float:
    """Largest gap between the stated Laplacian and a finite-difference one on probe points of B_1."""
    points = ball_points(np.zeros(n), 1.0, probes, seed)
    return float(np.abs(fd_laplacian(f.value, points, step) - f.laplacian(points)).max())
