"""A bounded sequence a(n) in {-1, 0, 1} correlating with mu while Delta a does not.

The sequence is built in blocks of four. With mu(4k) = 0, only the pattern
(mu(4k+1), mu(4k+2), mu(4k+3)) matters, and each block is chosen so that

    sum_{j=1..4} Delta a(4k+j) mu(4k+j) = 0
    sum_{j=1..4} a(4k+j) mu(4k+j)       >= 1

whenever the pattern is not all zero.
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, Tuple

import numpy as np

from src.api.errors import ConstructionError, UsageError
from src.numtheory import MobiusTable, mobius_of
from src.seqcore import IntegerSequence

Triple = Tuple[int, int, int]

# a(4k+1..4k+3) for the six zero-sum patterns
BALANCED_PATTERNS: Dict[Triple, Triple] = {
    (-1, 0, 1): (-1, -1, 0),
    (-1, 1, 0): (-1, 0, 1),
    (0, -1, 1): (0, -1, 0),
    (0, 1, -1): (0, 1, 0),
    (1, -1, 0): (1, 0, -1),
    (1, 0, -1): (1, 0, 0),
}


@dataclass(frozen=True)
class SarnakBlock:
    a: Triple
    """a(4k+1), a(4k+2), a(4k+3)"""
    delta: Triple
    """Delta a(4k+1), Delta a(4k+2), Delta a(4k+3)"""

    @property
    def next_a(self) -> int:
        """a(4k+4)"""
        return self.a[2] + self.delta[2]


def sarnak_block(pattern: Triple) -> SarnakBlock:
    """The block prescribed for mu(4k+1..4k+3) = pattern."""
    mu1, mu2, mu3 = pattern
    total = mu1 + mu2 + mu3
    if pattern == (0, 0, 0):
        return SarnakBlock((0, 0, 0), (0, 0, 0))
    if total != 0:
        sign = 1 if total > 0 else -1
        return SarnakBlock((sign, sign, sign), (0, 0, 0))
    a1, a2, a3 = BALANCED_PATTERNS[pattern]
    d1, d2 = a2 - a1, a3 - a2
    # mu3 is +-1 or 0, so dividing by it is multiplying by it
    d3 = -(d1 * mu1 + d2 * mu2) * mu3
    return SarnakBlock((a1, a2, a3), (d1, d2, d3))


def _pattern_index(mu1, mu2, mu3):
    return (mu1 + 1) * 9 + (mu2 + 1) * 3 + (mu3 + 1)


_BLOCKS = [sarnak_block(pattern) for pattern in product((-1, 0, 1), repeat=3)]
_BLOCK_A = np.array([block.a for block in _BLOCKS], dtype=np.int8)
_BLOCK_NEXT = np.array([block.next_a for block in _BLOCKS], dtype=np.int8)


@dataclass(frozen=True, eq=False)
class SarnakPair:
    """a on 0..N+1 and Delta a on 0..N, with the mu values they were built from"""

    limit: int
    a_values: np.ndarray
    delta_values: np.ndarray
    mu_values: np.ndarray
    """mu(0..N+1)"""

    @property
    def a(self) -> IntegerSequence:
        return IntegerSequence(tuple(self.a_values.tolist()))

    @property
    def delta(self) -> IntegerSequence:
        return IntegerSequence(tuple(self.delta_values.tolist()))


def _block_violations(a: np.ndarray, mu: np.ndarray) -> Dict[str, int]:
    """Counts blocks breaking the defining identities; a and mu cover whole blocks."""
    delta = np.diff(a, append=a[-1:]).astype(np.int64)
    blocks = (mu.size - 1) // 4
    mu_blocks = mu[1 : 4 * blocks + 1].reshape(blocks, 4).astype(np.int64)
    a_blocks = a[1 : 4 * blocks + 1].reshape(blocks, 4).astype(np.int64)
    delta_blocks = delta[1 : 4 * blocks + 1].reshape(blocks, 4)
    active = np.any(mu_blocks != 0, axis=1)
    correlation = (a_blocks * mu_blocks).sum(axis=1)
    return {
        "delta_sum": int(np.count_nonzero(active & ((delta_blocks * mu_blocks).sum(axis=1) != 0))),
        "correlation": int(np.count_nonzero(active & (correlation < 1))),
        "third": int(np.count_nonzero(3 * correlation < np.abs(mu_blocks).sum(axis=1))),
        "range": int(np.count_nonzero(np.abs(a) > 1)),
    }


def sarnak_build(limit: int, mu: MobiusTable) -> SarnakPair:
    """Builds the pair block by block and verifies both identities on every block.

    Args:
    -----
    limit: `int`
        N; a is produced on 0..N+1 and Delta a on 0..N.
    mu: `MobiusTable`
        Sieved mu with mu.limit >= N + 2. The at most three values past the
        table that the last block reads come from trial division.

    Raises:
    -------
    `ConstructionError`:
        Some block violates an identity, or a leaves {-1, 0, 1}.
    """
    if limit < 1:
        raise UsageError(f"limit must be positive, got {limit}")
    if mu.limit < limit + 2:
        raise UsageError(f"Möbius table of limit {mu.limit} is too short for N = {limit}; need {limit + 2}")

    blocks = (limit + 4) // 4
    span = 4 * blocks + 1
    mu_ext = np.zeros(span, dtype=np.int8)
    known = min(span, mu.limit + 1)
    mu_ext[:known] = mu.mu[:known]
    for n in range(known, span):
        mu_ext[n] = mobius_of(n)

    index = _pattern_index(
        mu_ext[1::4][:blocks].astype(np.int64),
        mu_ext[2::4][:blocks].astype(np.int64),
        mu_ext[3::4][:blocks].astype(np.int64),
    )
    a = np.zeros(span, dtype=np.int8)
    a[1::4][:blocks] = _BLOCK_A[index, 0]
    a[2::4][:blocks] = _BLOCK_A[index, 1]
    a[3::4][:blocks] = _BLOCK_A[index, 2]
    a[4::4][:blocks] = _BLOCK_NEXT[index]

    violations = _block_violations(a, mu_ext)
    if any(violations.values()):
        raise ConstructionError(f"block identities violated: {violations}")

    a_values = a[: limit + 2].copy()
    delta_values = np.diff(a_values).astype(np.int8)
    mu_values = mu_ext[: limit + 2].copy()
    for array in (a_values, delta_values, mu_values):
        array.setflags(write=False)
    return SarnakPair(limit, a_values, delta_values, mu_values)
