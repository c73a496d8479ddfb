import math

import numpy as np
import pytest

from hmono.checks import linfty
from hmono.checks.cost import build_cost
from hmono.checks.linfty import (
    AffineBranch,
    Ball,
    Branch,
    branch_threshold,
    certify,
    estimate_constants,
    h_curve,
    h_function,
    lemma51_bound,
    lipschitz_diagnostic,
    lp_mass,
    min_H_closed_form,
    minimiser,
    probe_lower_bound,
    statement_threshold,
    thm21_bound,
)
from hmono.checks.linfty.probe import probe_ratio
from hmono.checks.transport import ZOO, analytic_zoo, assignment_map, random_instance, solve_exact
from hmono.config import CertifyParams, Lemma51Params
from hmono.errors import ClosureAbsentError
from hmono.utils.types import CheckStatus


@pytest.fixture
def consts_3d():
    return estimate_constants(build_cost(3, 2))


def test_constants_for_quadratic_cost_in_three_dimensions(consts_3d):
    assert consts_3d.C1 == pytest.approx(6 / math.pi)
    assert consts_3d.C2 == pytest.approx(48.0)


def test_branch_threshold_value(consts_3d):
    assert branch_threshold(1.0, 0.5, consts_3d) == pytest.approx(math.pi / 512, rel=1e-12)


def test_minimiser_meets_the_cut_at_the_threshold(consts_3d):
    delta0 = branch_threshold(1.0, 0.5, consts_3d)
    assert minimiser(delta0, consts_3d) == pytest.approx(0.25, rel=1e-12)


def test_zero_mass_gives_zero_bound(consts_3d):
    result = thm21_bound(0.0, 1.0, 0.5, consts_3d)
    assert result.branch == Branch.SMALL
    assert result.bound == 0.0


def test_branch_switches_above_threshold(consts_3d):
    delta0 = branch_threshold(1.0, 0.5, consts_3d)
    assert thm21_bound(delta0, 1.0, 0.5, consts_3d).branch == Branch.SMALL
    assert thm21_bound(delta0 * (1 + 1e-9), 1.0, 0.5, consts_3d).branch == Branch.LARGE


def test_bound_rejects_bad_arguments(consts_3d):
    with pytest.raises(ValueError):
        thm21_bound(-1.0, 1.0, 0.5, consts_3d)
    with pytest.raises(ValueError):
        thm21_bound(1.0, 1.0, 1.0, consts_3d)
    with pytest.raises(ValueError):
        thm21_bound(1.0, 0.0, 0.5, consts_3d)


@pytest.mark.parametrize("n, p", [(1, 2.0), (2, 3.0), (3, 2.0), (3, 4.0)])
def test_closed_form_minimum_of_H(n, p):
    consts = estimate_constants(build_cost(n, p))
    delta = 1e-3
    r0 = minimiser(delta, consts)
    closed = min_H_closed_form(delta, consts)
    assert closed == pytest.approx(float(h_function(r0, delta, consts)), rel=1e-10)
    grid = np.geomspace(r0 / 10, r0 * 10, 20_001)
    assert h_function(grid, delta, consts).min() >= closed * (1 - 1e-12)


def test_h_curve_marks_minimiser(consts_3d):
    delta = branch_threshold(1.0, 0.5, consts_3d) / 10
    table = h_curve(delta, 1.0, 0.5, consts_3d)
    assert table["is_r0"].sum() == 1
    row = table[table["is_r0"]].iloc[0]
    assert row["H"] == pytest.approx(table["H"].min())
    assert row["admissible"]


def test_statement_threshold_agrees_with_branch_threshold(consts_3d):
    delta0 = branch_threshold(1.0, 0.5, consts_3d)
    scaled, threshold = statement_threshold(delta0, 1.0, 0.5, consts_3d)
    assert scaled == pytest.approx(threshold, rel=1e-12)


def test_lp_mass_of_translation():
    c = build_cost(3, 2)
    dmap = analytic_zoo("translation", 3, {"shift": [0.03, 0.0, 0.0]}, count=16)
    mass = lp_mass(dmap, c, Ball.unit(3), budget=4096)
    assert mass.value == pytest.approx(4 * math.pi / 3 * 0.03**2, rel=1e-12)
    assert mass.stderr == pytest.approx(0.0, abs=1e-15)


def test_lp_mass_one_dimensional_dilation():
    dmap = analytic_zoo("dilation", 1, {"scale": 2.0}, count=16)
    mass = lp_mass(dmap, build_cost(1, 2), Ball.unit(1), budget=256)
    assert mass.value == pytest.approx(2 / 3, rel=1e-12)


def test_lp_mass_of_identity_is_zero():
    dmap = analytic_zoo("identity", 2, count=16)
    assert lp_mass(dmap, build_cost(2, 3), Ball.unit(2), budget=1024).value == 0.0


def test_ball_helpers():
    ball = Ball([0.5, 0.0], 2.0, sampler_seed=3)
    assert ball.n == 2
    assert ball.shrink(0.5).radius == 1.0
    assert ball.contains(np.array([[0.5, 1.0], [3.0, 0.0]])).tolist() == [True, False]
    with pytest.raises(ValueError):
        Ball([0.0], 0.0)


def test_certify_identity():
    dmap = analytic_zoo("identity", 3, count=32)
    report = certify(dmap, build_cost(3, 2), Ball.unit(3), 0.5, budget=2048)
    assert report.passed
    assert report.delta == 0.0
    assert report.bound == 0.0
    assert report.empirical_sup == 0.0


def test_certify_small_translation():
    dmap = analytic_zoo("translation", 3, {"shift": [0.03, 0.0, 0.0]}, count=32)
    report = certify(dmap, build_cost(3, 2), Ball.unit(3), 0.5, budget=4096)
    assert report.branch == Branch.SMALL
    assert report.empirical_sup == pytest.approx(0.03)
    assert report.bound == pytest.approx(13.6, rel=0.02)
    assert report.passed


def test_certify_needs_closure():
    c = build_cost(2, 2)
    x, y = random_instance(2, 8, seed=1)
    dmap = assignment_map(x, y, solve_exact(x, y, c))
    with pytest.raises(ClosureAbsentError):
        certify(dmap, c, Ball.unit(2), 0.5, budget=256)


def _certification_cases():
    for name, entry in ZOO.items():
        if not entry.monotone:
            continue
        for n in (1, 3):
            if entry.one_dimensional and n != 1:
                continue
            for p in (2.0, 4.0):
                if name == "gradient_quartic" and p != 2.0:
                    continue
                yield name, n, p


@pytest.mark.parametrize("name, n, p", list(_certification_cases()))
@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("radius", [0.5, 1.0])
def test_monotone_zoo_maps_respect_the_bound(name, n, p, beta, radius):
    dmap = analytic_zoo(name, n, count=64)
    report = certify(dmap, build_cost(n, p), Ball(np.zeros(n), radius), beta, budget=4096)
    assert report.passed, report.to_dict()


def test_probe_for_quadratic_cost_is_constant():
    c = build_cost(3, 2)
    u = np.array([0.3, -0.1, 0.2])
    assert np.allclose(probe_ratio(c, u, [0.1, 0.5, 1.0]), 2.0)
    assert probe_lower_bound(c, u).delta0 == 1.0


def test_probe_for_quartic_cost_in_one_dimension():
    c = build_cost(1, 4)
    deltas = np.array([0.25, 0.75, 1.0])
    assert np.allclose(probe_ratio(c, [1.0], deltas), 4 - 6 * deltas + 4 * deltas**2)
    result = probe_lower_bound(c, [1.0])
    assert result.delta0 == 1.0
    assert result.table["ratio"].min() == pytest.approx(1.75, abs=1e-5)


def test_probe_is_scale_invariant():
    c = build_cost(2, 3)
    u = np.array([0.2, 0.1])
    assert np.allclose(probe_ratio(c, u, [0.2, 0.7]), probe_ratio(c, 5 * u, [0.2, 0.7]))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
def test_probe_threshold_is_positive(n, p):
    assert probe_lower_bound(build_cost(n, p), np.eye(n)[0]).delta0 > 0


def test_probe_rejects_zero_displacement():
    with pytest.raises(ValueError):
        probe_lower_bound(build_cost(2, 2), [0.0, 0.0])


def test_lipschitz_diagnostic_identity():
    dmap = analytic_zoo("identity", 2, count=16)
    result = lipschitz_diagnostic(dmap, build_cost(2, 2), [0.0, 0.0], [1.0, 0.5, 0.25], budget=1024)
    assert (result.table["scaled_average"] == 0).all()
    assert (result.table["quotient"] == 0).all()
    assert result.status == "lipschitz regime"


def test_lipschitz_diagnostic_flags_translation():
    dmap = analytic_zoo("translation", 2, {"shift": [0.1, 0.0]}, count=16)
    result = lipschitz_diagnostic(dmap, build_cost(2, 2), [0.0, 0.0], [1.0, 0.5, 0.25], budget=1024)
    assert result.status == "hypothesis fails"


def test_lipschitz_diagnostic_dilation_is_bounded():
    dmap = analytic_zoo("dilation", 2, {"scale": 2.0}, count=16)
    result = lipschitz_diagnostic(dmap, build_cost(2, 2), [0.0, 0.0], [1.0, 0.5, 0.25], budget=4096)
    assert result.status == "bounded"
    assert np.allclose(result.table["scaled_average"], 0.5, rtol=0.05)


def test_lipschitz_diagnostic_needs_descending_radii():
    dmap = analytic_zoo("identity", 2, count=16)
    with pytest.raises(ValueError):
        lipschitz_diagnostic(dmap, build_cost(2, 2), [0.0, 0.0], [0.25, 0.5])


@pytest.mark.parametrize(
    "scale, matrix, branch, bound",
    [
        (1.0, 0.0, AffineBranch.LINEAR_FREE, 4.0),
        (2.0, 0.0, AffineBranch.LINEAR_FREE, 8.0),
        (1.0, 2.0, AffineBranch.BOUNDARY, 6.0),
    ],
)
def test_affine_bound_hand_values(scale, matrix, branch, bound):
    dmap = analytic_zoo("dilation", 1, {"scale": scale}, count=32)
    report = lemma51_bound(dmap, [[matrix]], None, Ball.unit(1), 0.5, budget=512)
    assert report.branch == branch
    assert report.bound == pytest.approx(bound, rel=1e-9)
    assert report.passed


def test_affine_bound_identity_without_offset():
    dmap = analytic_zoo("identity", 1, count=32)
    report = lemma51_bound(dmap, None, None, Ball.unit(1), 0.5, budget=512)
    assert report.delta_prime == pytest.approx(1.0, rel=1e-9)
    assert report.empirical_sup <= 0.5


def test_affine_bound_interior_minimum():
    dmap = analytic_zoo("dilation", 1, {"scale": 1.01}, count=32)
    report = lemma51_bound(dmap, [[1.0]], None, Ball.unit(1), 0.5, budget=512)
    assert report.branch == AffineBranch.INTERIOR
    assert report.r0 == pytest.approx(0.05, rel=1e-6)
    assert report.bound == pytest.approx(0.4, rel=1e-6)
    assert report.bound == pytest.approx(report.closed_form_minimum, rel=1e-12)


def test_affine_bound_gradient_map_in_the_plane():
    dmap = analytic_zoo("gradient_quartic", 2, count=64)
    report = lemma51_bound(dmap, None, None, Ball.unit(2), 0.5, budget=16_384)
    assert report.delta_prime == pytest.approx(0.8, rel=0.01)
    assert report.bound == pytest.approx(12.8, rel=0.01)


def test_affine_bound_rejects_wrong_matrix_shape():
    dmap = analytic_zoo("identity", 2, count=16)
    with pytest.raises(ValueError):
        lemma51_bound(dmap, [[1.0]], None, Ball.unit(2))


def test_run_certify_records_probe(make_ctx):
    ctx = make_ctx("translation", n=2, params={"shift": [0.05, 0.0]})
    outcome = linfty.run(CertifyParams(kind="certify", budget=2048), ctx)
    assert outcome.status == CheckStatus.PASSED
    assert outcome.payload["probe_delta0"] == 1.0


def test_run_lemma51_includes_monotonicity(make_ctx):
    ctx = make_ctx("dilation", n=1, params={"scale": 2.0}, count=32)
    outcome = linfty.run_lemma51(Lemma51Params(kind="lemma51", budget=512), ctx)
    assert outcome.status == CheckStatus.PASSED
    assert outcome.payload["branch"] == "linear-free"
    assert outcome.payload["monotonicity"]["passed"]
