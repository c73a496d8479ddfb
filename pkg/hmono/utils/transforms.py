"""Reshaping of check reports into flat tables."""

import pandas as pd

from hmono.utils.types import CheckOutcome

type LabelledFrames = list[tuple[str, pd.DataFrame]]


def summary_frame(outcomes: list[CheckOutcome]) -> pd.DataFrame:
    """One row per executed check, in execution order."""
    rows = [
        {"index": k, "check": o.check, "status": str(o.status), "anchor": o.anchor, "message": o.message}
        for k, o in enumerate(outcomes)
    ]
    return pd.DataFrame(rows, columns=["index", "check", "status", "anchor", "message"])


def stack_frames(frames: LabelledFrames, key: str = "source") -> pd.DataFrame:
    """Concatenate frames, tagging each row with its label under ``key``."""
    tagged = [frame.assign(**{key: label}) for label, frame in frames if not frame.empty]
    if not tagged:
        return pd.DataFrame()
    result = pd.concat(tagged, ignore_index=True)
    return result[[key, *(c for c in result.columns if c != key)]]

