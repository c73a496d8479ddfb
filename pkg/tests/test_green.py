import math

import numpy as np
import pytest

from hmono.checks import green
from hmono.checks.cost import build_cost
from hmono.checks.green import (
    check_laplacian,
    convergence_study,
    gamma,
    gaussian,
    harmonic,
    identity_residual,
    identity_terms,
    named_function,
    proof_decomposition_probe,
    quadratic,
)
from hmono.config import GreenParams
from hmono.errors import UnsupportedInputError
from hmono.utils.types import CheckStatus


def test_gamma_values_in_three_dimensions():
    assert gamma(3, [1.0, 0.0, 0.0]) == pytest.approx(-1 / (4 * math.pi))
    assert gamma(3, [0.0, 2.0, 0.0]) == pytest.approx(-1 / (8 * math.pi))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gamma_is_homogeneous(n, rng):
    x = rng.normal(size=n)
    assert gamma(n, 3 * x) == pytest.approx(3 ** (2 - n) * gamma(n, x))


def test_gamma_domain():
    with pytest.raises(UnsupportedInputError):
        gamma(2, [1.0, 0.0])
    with pytest.raises(ValueError):
        gamma(3, [0.0, 0.0, 0.0])


@pytest.mark.parametrize("name", ["quadratic", "harmonic", "gaussian"])
def test_stated_laplacians_match_finite_differences(name):
    assert check_laplacian(named_function(name, 3), 3) < 1e-4


def test_named_function_rejects_unknown():
    with pytest.raises(ValueError):
        named_function("cubic", 3)


def test_quadratic_terms_at_the_centre():
    terms = identity_terms(quadratic(3), 3, np.zeros(3), 1.0, budget=2048, radial_order=32)
    assert terms.value == 0.0
    assert terms.average == pytest.approx(3 / 5, abs=1e-12)
    assert terms.correction == pytest.approx(-3 / 5, abs=1e-12)
    assert terms.residual < 1e-12


def test_harmonic_function_is_its_own_average():
    terms = identity_terms(harmonic(3), 3, [0.3, 0.1, -0.2], 0.5, budget=2048, radial_order=32)
    assert terms.correction == 0.0
    assert terms.residual < 1e-6


def test_gaussian_identity():
    terms = identity_terms(gaussian(3), 3, [0.2, 0.0, 0.0], 0.5, budget=65_536)
    assert terms.residual < 1e-3


def test_gaussian_convergence_rate():
    study = convergence_study(gaussian(3), 3, [0.2, 0.0, 0.0], 0.5, budgets=(2048, 4096, 8192, 16_384), radial_order=32)
    residuals = study.table["residual"].to_numpy()
    assert residuals[-1] < residuals[0]
    assert study.order >= 1.0


def test_identity_terms_validate_radius():
    with pytest.raises(ValueError):
        identity_terms(quadratic(3), 3, np.zeros(3), 0.0)


def test_decomposition_for_quadratic_cost():
    probe = proof_decomposition_probe(build_cost(3, 2), [1.0, 0.0, 0.0], 0.3, budget=4096, radial_order=32)
    assert probe.lhs == pytest.approx(0.6)
    assert probe.laplacian_term == pytest.approx(0.0, abs=1e-12)
    assert probe.residual < 1e-8
    assert probe.bound_holds


def test_decomposition_for_quartic_cost():
    probe = proof_decomposition_probe(build_cost(3, 4), [1.0, 0.0, 0.0], 0.3, budget=2**14)
    assert probe.residual < 1e-3
    assert probe.bound_holds


def test_decomposition_validation():
    with pytest.raises(UnsupportedInputError):
        proof_decomposition_probe(build_cost(2, 2), [1.0, 0.0], 0.3)
    with pytest.raises(ValueError):
        proof_decomposition_probe(build_cost(3, 2), [0.0, 0.0, 0.0], 0.3)
    with pytest.raises(ValueError):
        proof_decomposition_probe(build_cost(3, 2), [1.0, 0.0, 0.0], 1.0)


def test_run_with_decomposition(make_ctx):
    ctx = make_ctx("identity", n=2)
    outcome = green.run(GreenParams(kind="green-check", probe_delta=0.3), ctx)
    assert outcome.status == CheckStatus.PASSED
    assert outcome.payload["final_residual"] < 1e-4
    assert outcome.payload["decomposition"]["bound_holds"]


def test_identity_residual_shortcut():
    residual = identity_residual(harmonic(3), 3, [0.3, 0.1, -0.2], 0.5, budget=2048, radial_order=32)
    assert residual < 1e-6
