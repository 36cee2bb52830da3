"""Admissible 0/1 blocks: supports that miss a residue class mod p^2 for every prime p."""

from math import isqrt
from typing import Sequence

import numpy as np

from src.api.errors import RefusalError, UsageError
from src.numtheory.mobius import primes_upto

MAX_EXHAUSTIVE_LENGTH = 24
_CHUNK_BITS = 20


def covering_primes(length: int) -> list[int]:
    """Primes p with p^2 <= length; larger squares cannot be covered by `length` positions."""
    return primes_upto(isqrt(length)) if length >= 4 else []


def is_admissible(block: Sequence[int]) -> bool:
    support = [i for i, bit in enumerate(block) if bit]
    for p in covering_primes(len(block)):
        modulus = p * p
        if len({s % modulus for s in support}) == modulus:
            return False
    return True


def block_code(block: Sequence[int]) -> int:
    """Packs a 0/1 block, first position most significant"""
    code = 0
    for bit in block:
        code = (code << 1) | (1 if bit else 0)
    return code


def _class_masks(length: int, modulus: int) -> list[np.uint64]:
    masks = [0] * modulus
    for position in range(length):
        masks[position % modulus] |= 1 << (length - 1 - position)
    return [np.uint64(mask) for mask in masks]


def admissible_mask(codes: np.ndarray, length: int) -> np.ndarray:
    """Vectorised `is_admissible` over packed blocks of one length (length <= 64)."""
    if not 1 <= length <= 64:
        raise UsageError(f"packed blocks hold 1..64 positions, got {length}")
    codes = np.asarray(codes, dtype=np.uint64)
    admissible = np.ones(codes.shape, dtype=bool)
    for p in covering_primes(length):
        covers = np.ones(codes.shape, dtype=bool)
        for mask in _class_masks(length, p * p):
            covers &= (codes & mask) != 0
        admissible &= ~covers
    return admissible


def count_admissible(length: int) -> int:
    """Exact number of admissible 0/1 blocks of the given length.

    Scans all 2^J blocks in chunks of 2^20 packed codes.

    Raises:
    -------
    `RefusalError`:
        length > 24
    """
    if length < 1:
        raise UsageError(f"block length must be positive, got {length}")
    if length > MAX_EXHAUSTIVE_LENGTH:
        raise RefusalError(
            f"exhaustive count is limited to J <= {MAX_EXHAUSTIVE_LENGTH}, got {length}"
        )
    total = 1 << length
    chunk = 1 << min(length, _CHUNK_BITS)
    count = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, start + chunk, dtype=np.uint64)
        count += int(admissible_mask(codes, length).sum())
    return count
