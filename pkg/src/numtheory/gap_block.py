from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from math import isqrt, prod
from typing import Sequence, Tuple

from src.api.errors import InvariantViolationError, SearchBudgetError, SequenceError, UsageError
from src.numtheory.admissible import is_admissible
from src.numtheory.mobius import primes_upto
from src.seqcore import BinaryDigits, mul_mod1

DEFAULT_MAX_SCAN = 1_000_000
DEFAULT_SCAN_PRECISION = 64


@dataclass(frozen=True)
class GapBlock:
    """Gaps d_1..d_J of a 0/1 block (1, 0^(d_1-1), 1, ..., 0^(d_J-1), 1)"""

    gaps: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gaps", tuple(int(d) for d in self.gaps))
        if any(d < 1 for d in self.gaps):
            raise SequenceError(f"gaps must be positive, got {self.gaps}")

    @property
    def support_positions(self) -> Tuple[int, ...]:
        return tuple(accumulate(self.gaps, initial=0))

    @property
    def support_block(self) -> Tuple[int, ...]:
        block = [0] * (1 + sum(self.gaps))
        for position in self.support_positions:
            block[position] = 1
        return tuple(block)


def _step_modulus(step: int) -> int:
    """Product of p^2 over primes with p^2 <= step + 1 (the support size after the step)"""
    return prod(p * p for p in primes_upto(isqrt(step + 1)))


def _as_interval(interval: Tuple[float, float]) -> Tuple[Fraction, Fraction]:
    low, high = (Fraction(bound) for bound in interval)
    if not 0 <= low < high <= 1:
        raise UsageError(f"{interval} is not an open sub-interval of (0, 1)")
    return low, high


def gap_block_construct(
    x_digits: BinaryDigits,
    intervals: Sequence[Tuple[float, float]],
    max_scan: int = DEFAULT_MAX_SCAN,
    precision: int = DEFAULT_SCAN_PRECISION,
) -> GapBlock:
    """Admissible gap block whose j-th gap puts frac(d_j x) in the j-th interval.

    Before the j-th gap is chosen, d_j + sum_{i<j} d_i is forced to 0 mod p^2
    for every prime with p^2 <= j + 1. The new support point then repeats the
    residue of position 0, so no square modulus ever gets covered. Candidates
    run through that progression in increasing order; the first one whose
    fractional part lands in the interval is taken.

    Args:
    -----
    x_digits: `BinaryDigits`
        Binary digits of an irrational x.
    intervals: `Sequence[Tuple[float, float]]`
        Open sub-intervals of (0, 1), one per gap.
    max_scan: `int`
        Candidates tried per gap.
    precision: `int`
        Bits of frac(d x) used for membership.

    Returns:
    --------
    `GapBlock`:
        The gaps; an empty list of intervals gives the block (1).

    Raises:
    -------
    `SearchBudgetError`:
        No candidate within `max_scan` steps.
    """
    bounds = [_as_interval(interval) for interval in intervals]
    scale = 1 << precision
    gaps: list[int] = []
    total = 0
    for step, (low, high) in enumerate(bounds, start=1):
        modulus = _step_modulus(step)
        first = (-total) % modulus or modulus
        for k in range(max_scan):
            candidate = first + k * modulus
            value = Fraction(mul_mod1(candidate, x_digits, precision), scale)
            if low < value < high:
                break
        else:
            raise SearchBudgetError(
                f"gap {step}: no d = {first} mod {modulus} within {max_scan} candidates "
                f"puts frac(d x) in ({float(low)}, {float(high)})"
            )
        gaps.append(candidate)
        total += candidate

    block = GapBlock(tuple(gaps))
    if not is_admissible(block.support_block):
        raise InvariantViolationError(f"constructed gaps {block.gaps} are not admissible")
    return block
