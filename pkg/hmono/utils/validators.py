"""Table validation utilities using pandera."""

import numpy as np
import pandas as pd
import pandera as pa
from pandera import DataFrameSchema

type ValidationResult = dict[str, str | bool | list[str]]


def validate_dataframe(df: pd.DataFrame, schema: DataFrameSchema) -> ValidationResult:
    """Validate a DataFrame against a pandera schema, collecting every failure."""
    try:
        schema.validate(df, lazy=True)
        return {"valid": True, "status": "ok", "errors": []}
    except pa.errors.SchemaErrors as e:
        errors = []
        for _, row in e.failure_cases.iterrows():
            match row.to_dict():
                case {"column": col, "check": check, "failure_case": val}:
                    errors.append(f"Column '{col}' failed check '{check}': {val}")
                case failure:
                    errors.append(f"Validation failure: {failure}")
        return {"valid": False, "status": "error", "errors": errors}


def require_valid(df: pd.DataFrame, schema: DataFrameSchema, what: str) -> pd.DataFrame:
    match validate_dataframe(df, schema):
        case {"valid": True}:
            return df
        case {"errors": errors}:
            sample = "; ".join(errors[:5])
            raise ValueError(f"Invalid {what}: {sample}")


def coordinate_schema(n: int, prefixes: tuple[str, ...] = ("x",)) -> DataFrameSchema:
    """Schema for finite float coordinate columns such as x0..x{n-1}, tx0..tx{n-1}."""
    finite = pa.Check(lambda s: np.isfinite(s), name="finite")
    columns = {f"{prefix}{k}": pa.Column(float, checks=finite, nullable=False) for prefix in prefixes for k in range(n)}
    return DataFrameSchema(columns, strict=True, coerce=True)
