import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hmono.checks import monotone
from hmono.checks.cost import build_cost
from hmono.checks.monotone import (
    DefectMode,
    bilinear_defect,
    check_map,
    classical_defect,
    h_defect,
    psd_probe,
    select_pairs,
)
from hmono.checks.transport import analytic_zoo, assignment_map, random_instance, solve_exact
from hmono.config import CheckParams
from hmono.utils.maps import DiscreteMap
from hmono.utils.types import CheckStatus

coords = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False, allow_infinity=False)


def test_h_defect_examples():
    assert h_defect(build_cost(2, 2), [1.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]) == pytest.approx(2.0)
    assert h_defect(build_cost(1, 2), [1.0], [-1.0], [-1.0], [1.0]) == pytest.approx(-8.0)


def test_classical_defect_with_affine_offset():
    # T = 2x, A = 3: u = -x and the defect is 2 (x - y)^2
    x, y = np.array([1.0]), np.array([0.0])
    assert classical_defect([[3.0]], x, y, -x, -y) == pytest.approx(2.0)


def test_bilinear_defect_vanishes_on_the_diagonal():
    c = build_cost(2, 3)
    x = np.array([0.2, -0.4])
    assert bilinear_defect(c, x, x, [0.5, 0.5], [0.1, 0.3]) == pytest.approx(0.0)


@settings(max_examples=30)
@given(
    n=st.sampled_from([2, 3]),
    p=st.sampled_from([2.0, 3.0, 4.0]),
    values=st.lists(coords, min_size=12, max_size=12),
)
def test_bilinear_form_equals_h_form(n, p, values):
    c = build_cost(n, p)
    x, y, tx, ty = np.asarray(values[: 4 * n]).reshape(4, n)
    expected = h_defect(c, x, y, tx, ty)
    assert abs(expected - bilinear_defect(c, x, y, tx, ty)) < 1e-6 * (1 + abs(expected))


@pytest.mark.parametrize("mode", list(DefectMode))
def test_identity_passes_in_every_mode(mode):
    dmap = analytic_zoo("identity", 2, count=12)
    report = check_map(dmap, build_cost(2, 3), mode=mode)
    assert report.passed
    assert report.worst_defect >= 0
    assert report.pairs_checked == 12 * 11


def test_decreasing_map_fails_h_form():
    dmap = analytic_zoo("reflection", 1, count=16)
    report = check_map(dmap, build_cost(1, 2))
    assert not report.passed
    i, j = report.worst_pair
    assert i != j


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
@pytest.mark.parametrize("seed", range(4))
def test_exact_assignment_is_h_monotone(n, p, seed):
    c = build_cost(n, p)
    x, y = random_instance(n, 8, seed, spread=0.5)
    dmap = assignment_map(x, y, solve_exact(x, y, c))
    report = check_map(dmap, c, tolerance=1e-9)
    assert report.passed
    assert report.pairs_checked == 56


def test_select_pairs_enumerates_without_diagonal():
    i, j, sampled = select_pairs(4, threshold=10, samples=100, seed=0)
    assert not sampled
    assert len(i) == 12
    assert np.all(i != j)


def test_select_pairs_samples_large_maps():
    i, j, sampled = select_pairs(1000, threshold=10, samples=500, seed=7)
    assert sampled
    assert len(i) == 500
    assert np.all(i != j)
    again = select_pairs(1000, threshold=10, samples=500, seed=7)
    assert np.array_equal(i, again[0]) and np.array_equal(j, again[1])


def test_threaded_check_matches_serial():
    dmap = analytic_zoo("gradient_quartic", 2, count=128)
    c = build_cost(2, 2)
    serial = check_map(dmap, c, threshold=16, samples=20_000, seed=3)
    threaded = check_map(dmap, c, threshold=16, samples=20_000, seed=3, threads=4)
    assert serial == threaded


def test_check_map_needs_two_points():
    dmap = DiscreteMap(np.zeros((1, 2)), np.zeros((1, 2)), "single")
    with pytest.raises(ValueError):
        check_map(dmap, build_cost(2, 2))


def test_psd_probe_examples():
    c = build_cost(2, 2)
    x = np.array([0.3, -0.2])
    assert psd_probe(analytic_zoo("identity", 2, count=4), c, x) == pytest.approx(2.0, abs=1e-6)
    half = analytic_zoo("dilation", 2, {"scale": 0.5}, count=4)
    assert psd_probe(half, c, x) == pytest.approx(1.0, abs=1e-6)


def test_psd_probe_on_gradient_map(rng):
    c = build_cost(2, 2)
    dmap = analytic_zoo("gradient_quartic", 2, count=4)
    for x in rng.uniform(-1, 1, size=(10, 2)):
        assert psd_probe(dmap, c, x) >= -1e-4


def test_run_reports_worst_pair_for_negative_control(make_ctx):
    ctx = make_ctx("reflection", n=1, count=16)
    outcome = monotone.run(CheckParams(kind="check"), ctx)
    assert outcome.status == CheckStatus.FAILED
    assert "worst pair" in outcome.message
    assert len(outcome.payload["worst_pair"]) == 2


@settings(max_examples=100)
@given(
    n=st.integers(min_value=1, max_value=3),
    p=st.sampled_from([2.0, 2.5, 3.0, 4.0]),
    values=st.lists(coords, min_size=12, max_size=12),
)
def test_h_defect_is_symmetric_in_the_pair(n, p, values):
    c = build_cost(n, p)
    x, y, tx, ty = np.asarray(values[: 4 * n]).reshape(4, n)
    forward = h_defect(c, x, y, tx, ty)
    assert h_defect(c, y, x, ty, tx) == pytest.approx(forward, rel=1e-12, abs=1e-12)


@settings(max_examples=100)
@given(
    p=st.sampled_from([2.0, 3.0, 4.0]),
    values=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=4, max_size=4),
)
def test_one_dimensional_check_passes_exactly_for_comonotone_pairs(p, values):
    x, y, tx, ty = values
    product = (x - y) * (tx - ty)
    assume(abs(product) > 1e-2)
    dmap = DiscreteMap(np.array([[x], [y]]), np.array([[tx], [ty]]), "pair")
    report = check_map(dmap, build_cost(1, p))
    assert report.passed == (product > 0)
