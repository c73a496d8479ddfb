"""Pandera schemas for point clouds, stored maps and assignments."""

from pandera import Check, Column, DataFrameSchema

from hmono.utils.validators import coordinate_schema


def point_cloud_schema(n: int) -> DataFrameSchema:
    return coordinate_schema(n, ("x",))


def map_schema(n: int) -> DataFrameSchema:
    return coordinate_schema(n, ("x", "tx"))


ASSIGNMENT_SCHEMA = DataFrameSchema(
    columns={
        "source": Column(int, Check.ge(0), unique=True),
        "target": Column(int, Check.ge(0), unique=True),
        "cost": Column(float, Check.ge(0.0)),
    },
    strict=True,
    coerce=True,
)
