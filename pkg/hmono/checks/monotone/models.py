"""Pandera schemas for monotonicity tables."""

from pandera import Check, Column, DataFrameSchema

MONOTONICITY_SCHEMA = DataFrameSchema(
    columns={
        "label": Column(str),
        "mode": Column(str, Check.isin(["h", "bilinear", "classical"])),
        "n": Column(int, Check.ge(1)),
        "p": Column(float, Check.ge(2.0)),
        "pairs_checked": Column(int, Check.ge(1)),
        "worst_defect": Column(float),
        "worst_i": Column(int, Check.ge(0)),
        "worst_j": Column(int, Check.ge(0)),
        "passed": Column(bool),
    },
    strict=True,
    coerce=True,
)
