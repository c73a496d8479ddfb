"""Ball-averaged Green representation: f(y) = avg_{B_r(y)} f + correction(Delta f).

The correction (n / r^n) int_0^r rho^(n-1) int_{B_rho(y)} (Gamma(x - y) - Gamma(rho)) Delta f dx drho
is evaluated after exchanging the order of integration, which leaves a single
radial integral over spherical integrals of Delta f:

    (n / r^n) int_0^r kappa [s (r^n - s^n) / n - s^(n-1) (r^2 - s^2) / 2] S_Delta(s) ds

with kappa = 1 / (n omega_n (2 - n)) and S_g(s) = int_{|w|=1} g(y + s w) dw.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from hmono.checks.green.kernel import TestFunction, gamma_constant
from hmono.utils.numerics import unit_ball_volume
from hmono.utils.sampling import sphere_rule

logger = logging.getLogger(__name__)

RADIAL_ORDER = 64
EXACT_FLOOR = 1e-15


@dataclass(frozen=True)
class IdentityTerms:
    value: float
    average: float
    correction: float
    directions: int

    @property
    def residual(self) -> float:
        return abs(self.value - (self.average + self.correction))

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "average": self.average,
            "correction": self.correction,
            "residual": self.residual,
            "directions": self.directions,
        }


def _half_directions(budget: int, radial_order: int) -> int:
    """Power of two so the three-dimensional sphere rule is a trapezoid rule in the axial coordinate."""
    if budget < 1:
        raise ValueError(f"Quadrature budget must be positive, got {budget}")
    return 2 ** max(0, int(math.floor(math.log2(max(1, budget // (2 * radial_order))))))


def identity_terms(
    f: TestFunction,
    n: int,
    y,
    r: float,
    budget: int = 10_000,
    radial_order: int = RADIAL_ORDER,
    seed: int = 0,
) -> IdentityTerms:
    kappa = gamma_constant(n)
    if r <= 0:
        raise ValueError(f"Radius must be positive, got {r}")
    y = np.asarray(y, dtype=float).reshape(n)

    nodes, weights = np.polynomial.legendre.leggauss(radial_order)
    s = r * (nodes + 1) / 2
    w = r * weights / 2
    directions, weight = sphere_rule(n, _half_directions(budget, radial_order), seed)

    shells = y + s[:, None, None] * directions[None, :, :]
    sphere_f = weight * f.value(shells).sum(axis=1)
    sphere_lap = weight * f.laplacian(shells).sum(axis=1)

    average = float(np.dot(w, s ** (n - 1) * sphere_f)) / (unit_ball_volume(n) * r**n)
    kernel = kappa * (s * (r**n - s**n) / n - s ** (n - 1) * (r**2 - s**2) / 2)
    correction = n / r**n * float(np.dot(w, kernel * sphere_lap))
    value = float(f.value(y[None, :])[0])
    return IdentityTerms(value, average, correction, len(directions))


def identity_residual(f: TestFunction, n: int, y, r: float, budget: int = 10_000, **kwargs) -> float:
    return identity_terms(f, n, y, r, budget, **kwargs).residual


@dataclass(frozen=True)
class ConvergenceStudy:
    label: str
    table: pd.DataFrame
    order: float

    def to_dict(self) -> dict:
        return {"label": self.label, "order": self.order, "rows": self.table.to_dict(orient="records")}


def convergence_study(
    f: TestFunction,
    n: int,
    y,
    r: float,
    budgets=(256, 512, 1024, 2048),
    radial_order: int = RADIAL_ORDER,
) -> ConvergenceStudy:
    """Residual per budget and the least-squares slope of -log residual against log budget.

    The order is NaN when a residual is already at round-off, where no rate is measurable.
    """
    rows = []
    for budget in budgets:
        terms = identity_terms(f, n, y, r, budget, radial_order)
        rows.append({"budget": int(budget), "directions": terms.directions, "residual": terms.residual})
    table = pd.DataFrame(rows)

    residuals = table["residual"].to_numpy()
    if len(table) < 2 or np.any(residuals <= EXACT_FLOOR):
        order = math.nan
    else:
        slope, _ = np.polyfit(np.log(table["budget"]), np.log(residuals), 1)
        order = float(-slope)
    logger.info("Convergence study for %s (n=%d): order %.2f", f.label, n, order)
    return ConvergenceStudy(f.label, table, order)
