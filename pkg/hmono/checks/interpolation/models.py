"""Pandera schemas for interpolation and density tables."""

from pandera import Check, Column, DataFrameSchema


def violations_schema(n: int) -> DataFrameSchema:
    columns = {"t": Column(float, [Check.ge(0.0), Check.le(1.0)])}
    columns |= {f"x{k}": Column(float) for k in range(n)}
    columns |= {"norm_x": Column(float, Check.ge(0.0)), "norm_tx": Column(float, Check.ge(0.0))}
    return DataFrameSchema(columns=columns, strict=True, coerce=True)


def density_schema(n: int) -> DataFrameSchema:
    columns = {"t": Column(float, [Check.ge(0.0), Check.le(1.0)])}
    columns |= {f"c{k}": Column(float) for k in range(n)}
    columns |= {
        # NaN marks cells where the interpolation could not be inverted
        "value": Column(float, Check.ge(0.0, ignore_na=True), nullable=True),
        "failed": Column(bool),
        "provenance": Column(str, Check.isin(["pushforward-histogram", "closed-form"])),
    }
    return DataFrameSchema(columns=columns, strict=True, coerce=True)


SUP_CHECK_SCHEMA = DataFrameSchema(
    columns={
        "t": Column(float, [Check.ge(0.0), Check.le(1.0)]),
        "provenance": Column(str),
        "sup": Column(float, Check.ge(0.0)),
        "bound": Column(float, Check.ge(1.0)),
        "margin": Column(float),
        "passed": Column(bool),
    },
    strict=True,
    coerce=True,
)
