"""File I/O utilities for point clouds, reports and plot tables."""

import json
import math
from dataclasses import fields, is_dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd
from rich.console import Console

type FilePath = str | Path

console = Console()


def read_points_csv(path: FilePath) -> pd.DataFrame:
    """Read a CSV of points; headerless files get x0..x{n-1} column names."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Point file not found: {path}")

    frame = pd.read_csv(path)
    match frame.columns.tolist():
        case cols if all(str(c).startswith(("x", "tx")) for c in cols):
            pass
        case cols:
            # first row was data
            frame = pd.read_csv(path, header=None)
            frame.columns = [f"x{k}" for k in range(len(cols))]
    return frame.astype(float)


def to_jsonable(value):
    """Convert reports, numpy scalars and arrays to plain JSON types."""
    match value:
        case Enum():
            return value.value
        case np.ndarray():
            return [to_jsonable(v) for v in value.tolist()]
        case np.generic():
            return to_jsonable(value.item())
        case float() if not math.isfinite(value):
            return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
        case dict():
            return {str(k): to_jsonable(v) for k, v in value.items()}
        case list() | tuple():
            return [to_jsonable(v) for v in value]
        case Path():
            return str(value)
        case _ if hasattr(value, "to_dict") and not isinstance(value, pd.DataFrame):
            return to_jsonable(value.to_dict())
        case _ if is_dataclass(value):
            return {f.name: to_jsonable(getattr(value, f.name)) for f in fields(value)}
        case _:
            return value


def dumps_report(payload) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def write_json(payload, path: FilePath) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_report(payload))
    console.print(f"  Wrote report to {path}")


def write_output(df: pd.DataFrame, path: FilePath, fmt: str = "csv") -> None:
    """Write a DataFrame to the specified format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    match fmt:
        case "csv":
            df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        case "json":
            path.write_text(dumps_report(df.to_dict(orient="records")))
        case other:
            raise ValueError(f"Unsupported output format: {other}")

    console.print(f"  Wrote {len(df)} rows to {path}")
