from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import pandas as pd

from src.api import ExitCode, Verdict
from src.api.errors import InvariantViolationError

from .config import ExperimentType


@dataclass
class ExperimentResult:
    """Table, summary and verdict of one experiment run.

    `metadata` holds values the experiment adds to the configuration echo,
    such as reference lines.
    """

    experiment: ExperimentType
    frame: pd.DataFrame
    summary: Dict[str, Any] = field(default_factory=dict)
    verdict: Optional[Verdict] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> ExitCode:
        return ExitCode.FAIL if self.verdict == Verdict.FAIL else ExitCode.OK


@dataclass(frozen=True)
class PartialSumCheckpoint:
    """Exact sums over n = 1..limit"""

    limit: int
    sum_a_mu: int
    sum_delta_mu: int
    sum_abs_mu: int

    @property
    def average_a_mu(self) -> float:
        return self.sum_a_mu / self.limit

    @property
    def average_delta_mu(self) -> float:
        return self.sum_delta_mu / self.limit

    @property
    def third_abs_mu(self) -> float:
        """(1/3N) sum |mu(n)|"""
        return self.sum_abs_mu / (3 * self.limit)


@dataclass(frozen=True)
class PartialSumReport:
    checkpoints: Tuple[PartialSumCheckpoint, ...]

    def __post_init__(self) -> None:
        limits = [c.limit for c in self.checkpoints]
        if not limits or any(b <= a for a, b in zip(limits, limits[1:])):
            raise InvariantViolationError(f"checkpoints must increase strictly, got {limits}")

    @property
    def final(self) -> PartialSumCheckpoint:
        return self.checkpoints[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "N": [c.limit for c in self.checkpoints],
                "avg_a_mu": [c.average_a_mu for c in self.checkpoints],
                "avg_delta_a_mu": [c.average_delta_mu for c in self.checkpoints],
                "third_avg_abs_mu": [c.third_abs_mu for c in self.checkpoints],
            }
        )


@dataclass(frozen=True)
class DualEntropyRecord:
    sample: int
    x: str
    alphabet: int
    """grid N when quantized, number of distinct symbols when encoded exactly"""
    length: int
    count_all: int
    entropy: float
    truncation_count: Optional[int] = None
    digit_count: Optional[int] = None


@dataclass(frozen=True)
class DualEntropyReport:
    """Per-sample entropy curves; rows ordered by (sample, J)."""

    records: Tuple[DualEntropyRecord, ...]

    def spread(self, length: int) -> float:
        """max - min of the estimate at block length J across samples"""
        values = [r.entropy for r in self.records if r.length == length]
        if not values:
            return 0.0
        return max(values) - min(values)

    @property
    def has_digit_identity(self) -> bool:
        return any(r.truncation_count is not None for r in self.records)

    def digit_identity_holds(self) -> bool:
        return all(r.truncation_count == r.digit_count for r in self.records if r.truncation_count is not None)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.records:
            row = {
                "sample": r.sample,
                "x": r.x,
                "alphabet": r.alphabet,
                "J": r.length,
                "count_all": r.count_all,
                "entropy_nats": r.entropy,
            }
            if self.has_digit_identity:
                row["truncation_count_all"] = r.truncation_count
                row["digit_count_all"] = r.digit_count
            rows.append(row)
        frame = pd.DataFrame(rows)
        frame["spread_nats"] = frame["J"].map(self.spread)
        if self.has_digit_identity:
            frame = frame.astype({"truncation_count_all": "Int64", "digit_count_all": "Int64"})
        return frame
