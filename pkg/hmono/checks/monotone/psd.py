import numpy as np

from hmono.checks.cost.kernel import CostFunction, hess_h
from hmono.utils.maps import DiscreteMap, as_points


def psd_probe(dmap: DiscreteMap, c: CostFunction, x, fd_step: float = 1e-6) -> float:
    """Smallest eigenvalue of the symmetrised product D^2 h(x - Tx) . dT/dx at ``x``.

    The Jacobian always comes from central differences of the closure, since
    a C^1 h-monotone map makes this quadratic form nonnegative and the
    product itself need not be symmetric.
    """
    dmap.require_closure("psd_probe")
    x = as_points(x, dmap.n)
    jac = dmap.jacobian_at(x, fd_step, finite_difference=True)
    product = hess_h(c, x - dmap.evaluate(x)) @ jac
    sym = (product + np.swapaxes(product, -1, -2)) / 2
    return float(np.linalg.eigvalsh(sym)[..., 0].min())
