"""Homogeneous cost kernel: h, its derivatives, sphere extremes and the A / Phi integrals."""

from hmono.checks.cost.cross import cross_det_residual
from hmono.checks.cost.extremes import SphereExtremes, sphere_extremes
from hmono.checks.cost.kernel import (
    G,
    CostEvaluators,
    CostFamily,
    CostFunction,
    build_cost,
    eval_h,
    grad_h,
    hess_h,
    laplacian_h,
)
from hmono.checks.cost.quadrature import (
    QuadratureResult,
    QuadratureSpec,
    a_matrix,
    a_matrix_batch,
    phi,
    phi_batch,
)
