"""Exact discrete Monge problems between equal-size point clouds."""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linear_sum_assignment

from hmono.checks.cost.kernel import CostFunction, eval_h
from hmono.errors import DimensionMismatchError, UnsupportedInputError
from hmono.utils.maps import DiscreteMap, as_points
from hmono.utils.numerics import ensure_finite
from hmono.utils.sampling import sobol_points

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True)
class Assignment:
    permutation: tuple[int, ...]
    cost: float

    def __post_init__(self):
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError(f"Assignment is not a bijection: {self.permutation}")

    def to_dict(self) -> dict:
        return {"sigma": list(self.permutation), "cost": self.cost}


def _clouds(x, y, c: CostFunction) -> tuple[NDArray, NDArray]:
    x, y = as_points(x, c.n), as_points(y, c.n)
    if len(x) != len(y):
        raise ValueError(f"Point clouds differ in size: {len(x)} sources vs {len(y)} targets")
    if len(x) == 0:
        raise ValueError("Point clouds are empty")
    return x, y


def cost_matrix(x, y, c: CostFunction) -> NDArray:
    x, y = _clouds(x, y, c)
    return ensure_finite(np.asarray(eval_h(c, x[:, None, :] - y[None, :, :])), "assignment cost matrix")


def assignment_cost(matrix: NDArray, permutation) -> float:
    return math.fsum(matrix[i, j] for i, j in enumerate(permutation))


def solve_exact(x, y, c: CostFunction) -> Assignment:
    matrix = cost_matrix(x, y, c)
    rows, cols = linear_sum_assignment(matrix)
    permutation = tuple(int(j) for j in cols[np.argsort(rows)])
    return Assignment(permutation, assignment_cost(matrix, permutation))


@lru_cache(maxsize=BRUTE_FORCE_LIMIT + 1)
def _all_permutations(size: int) -> NDArray:
    return np.array(list(permutations(range(size))), dtype=np.intp).reshape(-1, size)


def solve_bruteforce(x, y, c: CostFunction) -> Assignment:
    """Exhaustive minimum; exact ties go to the lexicographically smallest permutation."""
    matrix = cost_matrix(x, y, c)
    size = len(matrix)
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(f"Brute force is limited to {BRUTE_FORCE_LIMIT} points, got {size}")

    perms = _all_permutations(size)
    totals = matrix[np.arange(size), perms].sum(axis=1)
    lowest = totals.min()
    # candidates are in lexicographic order; re-sum them exactly
    candidates = np.flatnonzero(totals <= lowest + 1e-12 * max(1.0, abs(lowest)))
    best, best_cost = None, math.inf
    for k in candidates:
        cost = assignment_cost(matrix, perms[k])
        if cost < best_cost:
            best, best_cost = k, cost
    return Assignment(tuple(int(j) for j in perms[best]), best_cost)


def rearrangement_1d(x, y, c: CostFunction) -> Assignment:
    """Monotone rearrangement: the k-th smallest source goes to the k-th smallest target."""
    if c.n != 1:
        raise UnsupportedInputError(f"Monotone rearrangement is one-dimensional, cost has n={c.n}")
    x, y = _clouds(x, y, c)
    order_x = np.argsort(x[:, 0], kind="stable")
    order_y = np.argsort(y[:, 0], kind="stable")
    permutation = np.empty(len(x), dtype=int)
    permutation[order_x] = order_y
    matrix = cost_matrix(x, y, c)
    return Assignment(tuple(int(j) for j in permutation), assignment_cost(matrix, permutation))


def assignment_map(x, y, assignment: Assignment, label: str = "assignment") -> DiscreteMap:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatchError(x.shape[1], y.shape[1])
    return DiscreteMap(x, y[list(assignment.permutation)], label)


def random_instance(n: int, size: int, seed: int = 0, spread: float = 0.05) -> tuple[NDArray, NDArray]:
    """Seeded source cloud in the unit ball and a target cloud displaced by at most ``spread``."""
    if size < 1:
        raise ValueError(f"Instance size must be positive, got {size}")
    rng = np.random.default_rng(seed)
    sources = 2 * sobol_points(n, size, seed) - 1
    sources /= np.maximum(1.0, np.linalg.norm(sources, axis=1, keepdims=True))
    jitter = rng.normal(size=(size, n))
    jitter *= spread * rng.uniform(size=(size, 1)) / np.maximum(np.linalg.norm(jitter, axis=1, keepdims=True), 1e-300)
    targets = sources[rng.permutation(size)] + jitter
    return sources, targets
