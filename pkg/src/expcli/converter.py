import json
from datetime import datetime, timezone
from typing import Any, Dict

import numpy as np
import pandas as pd

from src.utils import to_text

from .config import VERSION, ExperimentConfig
from .reports import ExperimentResult


def metadata_of(config: ExperimentConfig, result: ExperimentResult) -> Dict[str, Any]:
    """Configuration echo plus version, units and, unless suppressed, a UTC timestamp."""
    metadata = config.metadata()
    metadata.update(result.metadata)
    metadata["version"] = VERSION
    metadata["units"] = "nats"
    metadata["estimate"] = "finite-J"
    if not config.no_timestamp:
        metadata["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return metadata


def _plain(value: Any) -> Any:
    """numpy and pandas scalars as plain Python values, missing as None"""
    if value is None or value is pd.NA:
        return None
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if np.isnan(value) else float(value)
    return value


def to_csv(config: ExperimentConfig, result: ExperimentResult) -> str:
    """`# key=value ...` metadata line, then the table with a header row."""
    metadata = metadata_of(config, result)
    header = "# " + " ".join(f"{key}={to_text(value)}" for key, value in metadata.items())
    body = result.frame.to_csv(index=False, lineterminator="\n")
    return f"{header}\n{body}"


def to_json(config: ExperimentConfig, result: ExperimentResult) -> str:
    document = {
        "metadata": {key: _plain(value) for key, value in metadata_of(config, result).items()},
        "columns": [str(column) for column in result.frame.columns],
        "rows": [[_plain(value) for value in row] for row in result.frame.itertuples(index=False, name=None)],
        "summary": {key: _plain(value) for key, value in result.summary.items()},
        "verdict": result.verdict.value if result.verdict else None,
    }
    return json.dumps(document, indent=2) + "\n"


def render(config: ExperimentConfig, result: ExperimentResult) -> str:
    return to_json(config, result) if config.json else to_csv(config, result)
