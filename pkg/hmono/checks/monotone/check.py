"""Pairwise monotonicity certification of a discrete map."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray

from hmono.checks.cost.kernel import CostFunction
from hmono.checks.cost.quadrature import QuadratureSpec
from hmono.checks.monotone.defects import bilinear_defect_batch, classical_defect, h_defect
from hmono.utils.maps import DiscreteMap

logger = logging.getLogger(__name__)

PAIR_THRESHOLD = 512
PAIR_SAMPLES = 100_000
CHUNK = 4096


class DefectMode(StrEnum):
    H_FORM = "h"
    BILINEAR = "bilinear"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class MonotonicityReport:
    label: str
    mode: DefectMode
    pairs_checked: int
    worst_defect: float
    worst_pair: tuple[int, int]
    passed: bool
    tolerance: float
    sampled: bool

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "mode": str(self.mode),
            "pairs_checked": self.pairs_checked,
            "worst_defect": self.worst_defect,
            "worst_pair": list(self.worst_pair),
            "passed": self.passed,
            "tolerance": self.tolerance,
            "sampled": self.sampled,
        }


def select_pairs(size: int, threshold: int, samples: int, seed: int) -> tuple[NDArray, NDArray, bool]:
    """All ordered pairs i != j up to ``threshold`` points, else a seeded uniform sample."""
    if size <= threshold:
        i, j = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        mask = i != j
        return i[mask], j[mask], False
    rng = np.random.default_rng(seed)
    i = rng.integers(0, size, samples)
    j = (i + rng.integers(1, size, samples)) % size
    return i, j, True


def _chunk_minimum(values: NDArray, i: NDArray, j: NDArray) -> tuple[float, int, int]:
    order = np.lexsort((j, i, values))
    k = order[0]
    return float(values[k]), int(i[k]), int(j[k])


def check_map(
    dmap: DiscreteMap,
    c: CostFunction,
    mode: DefectMode | str = DefectMode.H_FORM,
    tolerance: float | None = None,
    matrix=None,
    quad: QuadratureSpec | None = None,
    threshold: int = PAIR_THRESHOLD,
    samples: int = PAIR_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> MonotonicityReport:
    mode = DefectMode(mode)
    if dmap.size < 2:
        raise ValueError(f"Monotonicity check needs at least 2 points, map '{dmap.label}' has {dmap.size}")

    x, tx = dmap.sources, dmap.images
    match mode:
        case DefectMode.H_FORM:
            tolerance = 1e-9 if tolerance is None else tolerance

            def evaluate(i, j):
                return np.asarray(h_defect(c, x[i], x[j], tx[i], tx[j]))

        case DefectMode.BILINEAR:
            tolerance = 1e-6 if tolerance is None else tolerance

            def evaluate(i, j):
                return bilinear_defect_batch(c, x[i], x[j], tx[i], tx[j], quad)

        case DefectMode.CLASSICAL:
            tolerance = 1e-9 if tolerance is None else tolerance
            a = np.zeros((dmap.n, dmap.n)) if matrix is None else np.atleast_2d(np.asarray(matrix, dtype=float))
            u = tx - x @ a.T

            def evaluate(i, j):
                return np.asarray(classical_defect(a, x[i], x[j], u[i], u[j]))

    first, second, sampled = select_pairs(dmap.size, threshold, samples, seed)
    chunks = [slice(k, k + CHUNK) for k in range(0, len(first), CHUNK)]

    def work(part: slice) -> tuple[float, int, int]:
        i, j = first[part], second[part]
        return _chunk_minimum(evaluate(i, j), i, j)

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            minima = list(pool.map(work, chunks))
    else:
        minima = [work(part) for part in chunks]

    worst, wi, wj = min(minima)
    report = MonotonicityReport(
        label=dmap.label,
        mode=mode,
        pairs_checked=len(first),
        worst_defect=worst,
        worst_pair=(wi, wj),
        passed=worst >= -tolerance,
        tolerance=tolerance,
        sampled=sampled,
    )
    logger.info(
        "Map '%s' %s-form: %d pairs, worst defect %.3e at %s",
        dmap.label, mode, report.pairs_checked, worst, report.worst_pair,
    )
    return report
