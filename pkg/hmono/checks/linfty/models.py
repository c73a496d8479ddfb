"""Pandera schemas for the estimate tables."""

from pandera import Check, Column, DataFrameSchema

H_CURVE_SCHEMA = DataFrameSchema(
    columns={
        "r": Column(float, Check.gt(0.0)),
        "H": Column(float, Check.ge(0.0)),
        "is_r0": Column(bool),
        "admissible": Column(bool),
    },
    strict=True,
    coerce=True,
)

BOUNDS_SCHEMA = DataFrameSchema(
    columns={
        "label": Column(str),
        "estimate": Column(str, Check.isin(["two-branch", "affine"])),
        "n": Column(int, Check.ge(1)),
        "p": Column(float, Check.ge(2.0)),
        "beta": Column(float, [Check.gt(0.0), Check.lt(1.0)]),
        "radius": Column(float, Check.gt(0.0)),
        "delta": Column(float, Check.ge(0.0)),
        "branch": Column(str),
        "bound": Column(float, Check.ge(0.0)),
        "empirical_sup": Column(float, Check.ge(0.0)),
        "passed": Column(bool),
    },
    strict=True,
    coerce=True,
)

PROBE_SCHEMA = DataFrameSchema(
    columns={
        "delta": Column(float, [Check.gt(0.0), Check.le(1.0)]),
        "ratio": Column(float),
        "threshold": Column(float, Check.ge(0.0)),
        "holds": Column(bool),
    },
    strict=True,
    coerce=True,
)

LIPSCHITZ_SCHEMA = DataFrameSchema(
    columns={
        "radius": Column(float, Check.gt(0.0)),
        "scaled_average": Column(float, Check.ge(0.0)),
        "quotient": Column(float, Check.ge(0.0)),
    },
    strict=True,
    coerce=True,
)
