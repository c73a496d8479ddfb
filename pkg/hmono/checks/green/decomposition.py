"""Representation of -G(delta u, u) as a ball average plus a Gamma-weighted Laplacian term."""

from dataclasses import dataclass

import numpy as np

from hmono.checks.cost.kernel import CostFunction, G, laplacian_h
from hmono.checks.green.identity import RADIAL_ORDER, identity_terms
from hmono.checks.green.kernel import TestFunction
from hmono.errors import UnsupportedInputError


@dataclass(frozen=True)
class DecompositionProbe:
    delta: float
    lhs: float
    average: float
    laplacian_term: float
    lower_bound: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - (self.average + self.laplacian_term))

    @property
    def bound_holds(self) -> bool:
        return self.lhs >= self.lower_bound

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "lhs": self.lhs,
            "A": self.average,
            "B": self.laplacian_term,
            "residual": self.residual,
            "lower_bound": self.lower_bound,
            "bound_holds": self.bound_holds,
        }


def proof_decomposition_probe(
    c: CostFunction,
    u,
    delta: float,
    budget: int = 10_000,
    radial_order: int = RADIAL_ORDER,
) -> DecompositionProbe:
    """With v(x) = -G(x, u) and r = delta |u|, compare v(delta u) against the identity on B_r(delta u).

    The Laplacian of v is Delta h(x) - Delta h(x - u). The lower bound
    (m / 2) delta |u|^p is reported next to the left-hand side.
    """
    n = c.n
    if n < 3:
        raise UnsupportedInputError(f"Decomposition probe needs n >= 3, got n={n}")
    u = np.asarray(u, dtype=float).reshape(n)
    size = float(np.linalg.norm(u))
    if size == 0:
        raise ValueError("Decomposition probe needs a nonzero displacement u")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")

    v = TestFunction(
        "decomposition",
        lambda x: -np.asarray(G(c, x, u)),
        lambda x: np.asarray(laplacian_h(c, x)) - np.asarray(laplacian_h(c, x - u)),
    )
    centre = delta * u
    terms = identity_terms(v, n, centre, delta * size, budget, radial_order)
    return DecompositionProbe(
        delta=delta,
        lhs=terms.value,
        average=terms.average,
        laplacian_term=terms.correction,
        lower_bound=c.extremes.m / 2 * delta * size**c.p,
    )
