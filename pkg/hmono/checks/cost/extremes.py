"""Extremes of h, |grad h| and the Hessian spectrum on the unit sphere."""

import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from hmono.checks.cost.kernel import CostFamily, CostFunction, eval_h, grad_h, hess_h
from hmono.utils.sampling import sphere_grid

logger = logging.getLogger(__name__)

SPHERE_SAMPLES = 4096


@dataclass(frozen=True)
class SphereExtremes:
    m: float
    M: float
    grad_max: float
    lam: float
    Lam: float
    analytic: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _hess_eigs(c: CostFunction, theta: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(hess_h(c, theta))


def _refine(objective, start: np.ndarray, tolerance: float) -> float:
    """Local Nelder-Mead polish of a sphere objective parametrised through x / |x|."""

    def on_sphere(x):
        r = np.linalg.norm(x)
        return objective(x / r) if r > 0 else np.inf

    result = minimize(on_sphere, start, method="Nelder-Mead", options={"xatol": tolerance, "fatol": tolerance})
    return float(min(result.fun, objective(start)))


def sphere_extremes(c: CostFunction, tolerance: float = 1e-10, samples: int = SPHERE_SAMPLES) -> SphereExtremes:
    if tolerance <= 0:
        raise ValueError(f"Refinement tolerance must be positive, got {tolerance}")

    if c.family == CostFamily.ISOTROPIC:
        # n = 1 has only the radial eigenvalue p(p-1)
        lam = c.p if c.n >= 2 else c.p * (c.p - 1)
        return SphereExtremes(m=1.0, M=1.0, grad_max=c.p, lam=lam, Lam=c.p * (c.p - 1), analytic=True)

    theta = sphere_grid(c.n, samples)
    values = np.asarray(eval_h(c, theta))
    gradients = np.linalg.norm(grad_h(c, theta), axis=-1)
    eigs = _hess_eigs(c, theta)
    lowest, highest = eigs[:, 0], eigs[:, -1]

    objectives = {
        "m": (lambda x: float(eval_h(c, x)), values, 1.0),
        "M": (lambda x: -float(eval_h(c, x)), values, -1.0),
        "grad_max": (lambda x: -float(np.linalg.norm(grad_h(c, x))), gradients, -1.0),
        "lam": (lambda x: float(_hess_eigs(c, x)[0]), lowest, 1.0),
        "Lam": (lambda x: -float(_hess_eigs(c, x)[-1]), highest, -1.0),
    }
    found = {}
    for name, (objective, sampled, sign) in objectives.items():
        best = int(np.argmin(sign * sampled))
        if c.n == 1:
            found[name] = float(sampled[best])
            continue
        found[name] = sign * _refine(objective, theta[best], tolerance)

    lam = found["lam"]
    if lam <= 0:
        logger.warning("Hessian not positive definite on the sphere (min eigenvalue %.3e); reporting 0", lam)
        lam = 0.0
    return SphereExtremes(
        m=found["m"],
        M=found["M"],
        grad_max=found["grad_max"],
        lam=lam,
        Lam=found["Lam"],
        analytic=False,
    )
