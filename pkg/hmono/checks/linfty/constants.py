"""Proof constants of the two-branch local L-infinity estimate."""

from dataclasses import dataclass

from hmono.checks.cost.kernel import CostFunction
from hmono.utils.numerics import unit_ball_volume


@dataclass(frozen=True)
class EstimateConstants:
    n: int
    p: float
    m: float
    M: float
    C1: float
    C2: float
    K1: float
    bar_delta: float | None = None

    def K2(self, beta: float) -> float:
        if not 0 < beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {beta}")
        return self.C1 * (self.p + self.n) / (self.p - 1) * ((1 - beta) / 2) ** (-(self.n + 1))

    @property
    def kappa(self) -> float:
        """(n + 1) / (p - 1), the ratio fixing the minimiser of H."""
        return (self.n + 1) / (self.p - 1)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "m": self.m,
            "M": self.M,
            "C1": self.C1,
            "C2": self.C2,
            "K1": self.K1,
            "bar_delta": self.bar_delta,
        }


def estimate_constants(c: CostFunction, bar_delta: float | None = None) -> EstimateConstants:
    n, p = c.n, c.p
    ext = c.extremes
    ratio = ext.M / ext.m
    C1 = 2 ** (p + 1) * ratio / unit_ball_volume(n)
    C2 = 2 ** (p + 2) * (2 ** (p - 1) + 1) * ratio
    if bar_delta is not None:
        if not 0 < bar_delta <= 1:
            raise ValueError(f"bar_delta must lie in (0, 1], got {bar_delta}")
        C2 = max(C2, bar_delta ** (-(p - 1)))

    k = (n + 1) / (p - 1)
    K1 = (k ** (-(n + 1) / (n + p)) + k ** ((p - 1) / (n + p))) * C1 ** ((p - 1) / (n + p)) * C2 ** ((n + 1) / (n + p))
    return EstimateConstants(n=n, p=p, m=ext.m, M=ext.M, C1=C1, C2=C2, K1=K1, bar_delta=bar_delta)
