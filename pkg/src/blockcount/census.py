from dataclasses import dataclass
from math import log
from typing import List, Tuple

import pandas as pd

from src.api.errors import UsageError
from src.api.undefined import UNDEFINED, UndefinedOr

_COUNT_COLUMNS = ("count_all", "count_regular", "count_effective", "count_effective_regular")


@dataclass(frozen=True)
class BlockRecord:
    """Distinct J-block counts of one sequence.

    Regular blocks start at multiples of J; effective blocks occur at least
    tau times. Engines that only count all blocks leave the rest UNDEFINED.
    """

    length: int
    count_all: int
    count_regular: UndefinedOr[int] = UNDEFINED
    count_effective: UndefinedOr[int] = UNDEFINED
    count_effective_regular: UndefinedOr[int] = UNDEFINED

    @property
    def entropy_all(self) -> float:
        """ln(count_all) / J in nats"""
        return log(self.count_all) / self.length

    @property
    def entropy_regular(self) -> UndefinedOr[float]:
        if self.count_regular is UNDEFINED:
            return UNDEFINED
        return log(self.count_regular) / self.length


@dataclass(frozen=True)
class BlockCensus:
    """Per-J records for J = 1..J_max"""

    records: Tuple[BlockRecord, ...]
    sequence_length: int
    alphabet_size: int
    tau: UndefinedOr[int] = UNDEFINED
    engine: str = ""

    @property
    def j_max(self) -> int:
        return len(self.records)

    def record(self, length: int) -> BlockRecord:
        if not 1 <= length <= self.j_max:
            raise UsageError(f"census covers J = 1..{self.j_max}, asked for {length}")
        return self.records[length - 1]

    def count_all(self, length: int) -> int:
        return self.record(length).count_all

    def entropy_all(self, length: int) -> float:
        return self.record(length).entropy_all

    def entropy_regular(self, length: int) -> UndefinedOr[float]:
        return self.record(length).entropy_regular

    def violations(self) -> List[str]:
        """Nesting and size bounds that every census must satisfy"""
        found = []
        q, n = self.alphabet_size, self.sequence_length
        for r in self.records:
            J = r.length
            if r.count_all > min(q**J, n - J + 1):
                found.append(f"J={J}: count_all {r.count_all} exceeds min(q^J, n-J+1)")
            if r.count_regular is not UNDEFINED and r.count_regular > r.count_all:
                found.append(f"J={J}: regular count exceeds count_all")
            if r.count_effective is not UNDEFINED:
                if r.count_effective > r.count_all:
                    found.append(f"J={J}: effective count exceeds count_all")
                if self.tau == 1 and r.count_effective != r.count_all:
                    found.append(f"J={J}: tau=1 but effective count differs from count_all")
            if r.count_effective_regular is not UNDEFINED and r.count_effective_regular > r.count_regular:
                found.append(f"J={J}: effective regular count exceeds regular count")
        return found

    def to_frame(self) -> pd.DataFrame:
        """One row per J; UNDEFINED counts become missing values."""
        rows = []
        for r in self.records:
            rows.append(
                {
                    "J": r.length,
                    "count_all": r.count_all,
                    "count_regular": None if r.count_regular is UNDEFINED else r.count_regular,
                    "count_effective": None if r.count_effective is UNDEFINED else r.count_effective,
                    "count_effective_regular": (
                        None if r.count_effective_regular is UNDEFINED else r.count_effective_regular
                    ),
                    "entropy_all_nats": r.entropy_all,
                    "entropy_regular_nats": (
                        None if r.entropy_regular is UNDEFINED else r.entropy_regular
                    ),
                }
            )
        return pd.DataFrame(rows).astype({name: "Int64" for name in _COUNT_COLUMNS})


def entropy_curve(census: BlockCensus) -> List[Tuple[int, float, UndefinedOr[float]]]:
    """(J, ln|B_J|/J, ln|B_J^r|/J) for every J of the census, in nats."""
    if not census.records:
        raise UsageError("empty census")
    return [(r.length, r.entropy_all, r.entropy_regular) for r in census.records]
