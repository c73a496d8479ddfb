import numpy as np
import pytest

from hmono.checks.cost import build_cost
from hmono.checks.transport import (
    ZOO,
    Assignment,
    analytic_zoo,
    assignment_table,
    random_instance,
    read_map_csv,
    read_point_cloud,
    rearrangement_1d,
    solve_bruteforce,
    solve_exact,
)
from hmono.errors import UnsupportedInputError


def test_single_point_has_one_pairing():
    c = build_cost(2, 2)
    result = solve_exact([[0.0, 0.0]], [[1.0, 1.0]], c)
    assert result.permutation == (0,)
    assert result.cost == pytest.approx(2.0)


def test_monotone_pairing_beats_crossed():
    c = build_cost(1, 3)
    result = solve_exact([[0.0], [1.0]], [[2.0], [3.0]], c)
    assert result.permutation == (0, 1)
    assert result.cost == pytest.approx(16.0)


@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
@pytest.mark.parametrize("seed", range(3))
def test_exact_matches_bruteforce(p, seed):
    c = build_cost(2, p)
    x, y = random_instance(2, 8, seed, spread=0.5)
    exact, brute = solve_exact(x, y, c), solve_bruteforce(x, y, c)
    assert exact.cost == pytest.approx(brute.cost, rel=1e-12, abs=1e-15)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
def test_exact_matches_bruteforce_over_many_instances(n, p):
    c = build_cost(n, p)
    for seed in range(100):
        x, y = random_instance(n, 8, seed, spread=0.5)
        assert solve_exact(x, y, c).cost == pytest.approx(solve_bruteforce(x, y, c).cost, rel=1e-12, abs=1e-15)


def test_bruteforce_identity_when_clouds_coincide():
    c = build_cost(2, 2)
    x = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    result = solve_bruteforce(x, x, c)
    assert result.permutation == (0, 1, 2)
    assert result.cost == 0.0


def test_bruteforce_sorts_collinear_points():
    c = build_cost(1, 2)
    result = solve_bruteforce([[0.0], [2.0], [1.0]], [[10.0], [11.0], [12.0]], c)
    assert result.permutation == (0, 2, 1)


def test_bruteforce_size_limit():
    c = build_cost(1, 2)
    x = np.arange(10.0)[:, None]
    with pytest.raises(ValueError):
        solve_bruteforce(x, x, c)


def test_rearrangement_sorts():
    c = build_cost(1, 2)
    result = rearrangement_1d([[1.0], [0.0]], [[5.0], [4.0]], c)
    assert result.permutation == (0, 1)
    assert result.cost == pytest.approx(32.0)


@pytest.mark.parametrize("p", [2.0, 4.0])
def test_rearrangement_matches_bruteforce(p, rng):
    c = build_cost(1, p)
    x, y = rng.normal(size=(7, 1)), rng.normal(size=(7, 1))
    assert rearrangement_1d(x, y, c).cost == pytest.approx(solve_bruteforce(x, y, c).cost, rel=1e-12)


def test_rearrangement_is_one_dimensional():
    with pytest.raises(UnsupportedInputError):
        rearrangement_1d([[0.0, 0.0]], [[1.0, 1.0]], build_cost(2, 2))


def test_assignment_rejects_non_bijection():
    with pytest.raises(ValueError):
        Assignment((0, 0), 1.0)


def test_clouds_of_different_size_are_rejected():
    with pytest.raises(ValueError):
        solve_exact([[0.0], [1.0]], [[0.0]], build_cost(1, 2))


def test_assignment_table_rows():
    c = build_cost(1, 2)
    x, y = [[0.0], [1.0]], [[1.0], [3.0]]
    table = assignment_table(x, y, c, solve_exact(x, y, c))
    assert table["target"].tolist() == [0, 1]
    assert table["cost"].tolist() == pytest.approx([1.0, 4.0])


def test_zoo_identity_and_translation():
    identity = analytic_zoo("identity", 3, count=32)
    assert np.array_equal(identity.images, identity.sources)
    shifted = analytic_zoo("translation", 2, {"shift": [0.1, 0.0]}, count=32)
    assert np.allclose(shifted.displacement(), [0.1, 0.0])


def test_zoo_jacobians_match_finite_differences(rng):
    x = rng.uniform(-0.8, 0.8, size=(5, 2))
    for name in ("dilation", "gradient_quartic", "reflection"):
        dmap = analytic_zoo(name, 2, count=8)
        assert np.allclose(dmap.jacobian_at(x), dmap.jacobian_at(x, finite_difference=True), atol=1e-6)


def test_zoo_rejects_bad_parameters():
    with pytest.raises(ValueError):
        analytic_zoo("piecewise_linear", 1, {"knots": [0.0, 1.0], "values": [1.0, 0.0]})
    with pytest.raises(ValueError):
        analytic_zoo("dilation", 2, {"scale": -1.0})
    with pytest.raises(ValueError):
        analytic_zoo("spiral", 2)


def test_zoo_registry_flags_negative_control():
    assert not ZOO["reflection"].monotone
    assert ZOO["piecewise_linear"].one_dimensional


def test_read_map_csv(tmp_path):
    path = tmp_path / "pairs.csv"
    path.write_text("x0,x1,tx0,tx1\n0,0,0.1,0\n1,0,1.1,0\n")
    dmap = read_map_csv(path)
    assert dmap.label == "pairs"
    assert dmap.n == 2
    assert np.allclose(dmap.displacement(), [[0.1, 0.0], [0.1, 0.0]])
    assert not dmap.has_closure


def test_read_map_csv_rejects_odd_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x0,x1,tx0\n0,0,1\n")
    with pytest.raises(ValueError):
        read_map_csv(path)


def test_read_point_cloud_inline_json():
    points = read_point_cloud("[[0, 1], [2, 3]]")
    assert points.shape == (2, 2)
    with pytest.raises(ValueError):
        read_point_cloud("[[0, 1], [2")
