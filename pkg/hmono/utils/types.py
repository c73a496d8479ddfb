"""Shared type definitions for the toolkit."""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.typing import NDArray

if TYPE_CHECKING:
    from hmono.checks.cost.kernel import CostFunction
    from hmono.config import Settings
    from hmono.utils.maps import DiscreteMap

type Vector = NDArray[np.float64]
type Matrix = NDArray[np.float64]
type PointArray = NDArray[np.float64]
type VectorField = Callable[[PointArray], PointArray]
type JacobianField = Callable[[PointArray], NDArray[np.float64]]
type ScalarField = Callable[[PointArray], NDArray[np.float64]]
type ReportDict = dict[str, Any]


class CheckStatus(StrEnum):
    PASSED = "passed"
    FAILED = "failed"
    GATED = "gated"


class Provenance(StrEnum):
    PUSHFORWARD_HISTOGRAM = "pushforward-histogram"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class CheckOutcome:
    """What the orchestrator records for one executed check."""

    check: str
    status: CheckStatus
    anchor: str
    payload: ReportDict
    message: str = ""
    artifacts: tuple[Any, ...] = field(default=(), compare=False)

    def to_dict(self) -> ReportDict:
        return {
            "check": self.check,
            "status": str(self.status),
            "anchor": self.anchor,
            "message": self.message,
            "report": self.payload,
        }


def classify_status(passed: bool, gated: bool = False) -> CheckStatus:
    match (passed, gated):
        case (_, True):
            return CheckStatus.GATED
        case (True, False):
            return CheckStatus.PASSED
        case _:
            return CheckStatus.FAILED


@dataclass(frozen=True)
class RunContext:
    """Inputs shared by every check of one experiment run."""

    cost: "CostFunction"
    dmap: "DiscreteMap"
    settings: "Settings"
    seed: int
