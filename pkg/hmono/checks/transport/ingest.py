"""Point-cloud and map ingestion from CSV files or inline JSON."""

import json
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from hmono.checks.transport.models import map_schema, point_cloud_schema
from hmono.utils.io import console, read_points_csv
from hmono.utils.maps import DiscreteMap
from hmono.utils.validators import require_valid


def read_point_cloud(source: str | Path | list) -> NDArray:
    """Points from a CSV file (one point per line) or an inline JSON list of points."""
    match source:
        case list():
            frame = pd.DataFrame(np.atleast_2d(np.asarray(source, dtype=float)))
            frame.columns = [f"x{k}" for k in range(frame.shape[1])]
        case str() if source.lstrip().startswith("["):
            try:
                return read_point_cloud(json.loads(source))
            except json.JSONDecodeError as e:
                raise ValueError(f"Inline point list is not valid JSON: {e.msg} at column {e.colno}") from e
        case str() | Path():
            frame = read_points_csv(source)
        case other:
            raise ValueError(f"Unsupported point source: {type(other).__name__}")

    n = frame.shape[1]
    require_valid(frame, point_cloud_schema(n), "point cloud")
    return frame.to_numpy(dtype=float)


def read_map_csv(path: str | Path, label: str | None = None) -> DiscreteMap:
    """A discrete map from a CSV with columns x0..x{n-1}, tx0..tx{n-1}."""
    path = Path(path)
    frame = read_points_csv(path)
    n = sum(1 for col in frame.columns if str(col).startswith("x"))
    if n == 0 or frame.shape[1] != 2 * n:
        raise ValueError(f"{path}: expected columns x0..x{{n-1}} and tx0..tx{{n-1}}, got {list(frame.columns)}")
    require_valid(frame, map_schema(n), f"map file {path.name}")

    console.print(f"  Loaded {len(frame)} map pairs from {path.name}")
    return DiscreteMap(
        frame[[f"x{k}" for k in range(n)]].to_numpy(),
        frame[[f"tx{k}" for k in range(n)]].to_numpy(),
        label or path.stem,
    )
