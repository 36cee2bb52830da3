from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.api.errors import ResourceError, UsageError
from src.seqcore import IntegerSequence

# int8 table plus the prime mask, about 2 bytes per entry
MAX_SIEVE_LIMIT = 2_000_000_000


def prime_sieve(limit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Eratosthenes sieve up to `limit` inclusive.

    Returns:
    --------
    `Tuple[np.ndarray, np.ndarray]`:
        (primes as int64, is_prime mask of length limit+1)
    """
    if limit < 2:
        return np.array([], dtype=np.int64), np.zeros(max(limit + 1, 0), dtype=bool)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.nonzero(is_prime)[0].astype(np.int64), is_prime


def primes_upto(limit: int) -> list[int]:
    return prime_sieve(limit)[0].tolist()


@dataclass(frozen=True, eq=False)
class MobiusTable:
    """mu(n) for 0 <= n <= limit, mu(0) = 0"""

    limit: int
    mu: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.mu[n])

    def squared(self) -> np.ndarray:
        """mu^2, the indicator of the square-free numbers, as uint8"""
        return (self.mu != 0).astype(np.uint8)

    def mertens(self, n: int) -> int:
        """sum_{k <= n} mu(k)"""
        if not 0 <= n <= self.limit:
            raise UsageError(f"Mertens sum up to {n} needs a table of limit {n}, have {self.limit}")
        return int(self.mu[: n + 1].sum(dtype=np.int64))

    def value(self, n: int) -> int:
        """mu(n), falling back to trial division beyond the table"""
        if 0 <= n <= self.limit:
            return int(self.mu[n])
        return mobius_of(n)


def mobius_sieve(limit: int) -> MobiusTable:
    """Exact mu on [0, limit].

    Starts from all ones and, for every prime p, flips the sign of the
    multiples of p and clears the multiples of p^2.

    Raises:
    -------
    `ResourceError`:
        The table would not fit in memory.
    """
    if limit < 1:
        raise UsageError(f"sieve limit must be positive, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise ResourceError(f"sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}")
    try:
        primes, _ = prime_sieve(limit)
        mu = np.ones(limit + 1, dtype=np.int8)
        mu[0] = 0
        for p in primes.tolist():
            mu[p::p] *= -1
            square = p * p
            if square <= limit:
                mu[square::square] = 0
    except MemoryError as e:
        raise ResourceError(f"not enough memory for a sieve of limit {limit}") from e
    mu.setflags(write=False)
    return MobiusTable(limit, mu)


def mobius_of(n: int) -> int:
    """mu(n) by trial division, mu(0) = 0"""
    if n < 0:
        raise UsageError(f"mu is defined on non-negative integers, got {n}")
    if n == 0:
        return 0
    sign = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1 if p == 2 else 2
    if n > 1:
        sign = -sign
    return sign


def squarefree_enumerate(limit: int, table: MobiusTable | None = None) -> IntegerSequence:
    """Increasing list of the square-free m with 1 <= m <= limit."""
    if limit < 1:
        raise UsageError(f"limit must be positive, got {limit}")
    if table is None or table.limit < limit:
        table = mobius_sieve(limit)
    return IntegerSequence(tuple(np.nonzero(table.mu[: limit + 1])[0].tolist()))
