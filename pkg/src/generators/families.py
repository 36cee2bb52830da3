"""Sequence families: symbol streams, integer sequences and torus samples."""

from itertools import accumulate
from pathlib import Path
from typing import Optional

import numpy as np

from src.api.errors import ResourceError, SequenceError, UsageError
from src.generators.digits import (
    DigitStream,
    PrngDigitStream,
    QuadraticDigitStream,
    fibonacci_symbols,
    splitmix64,
)
from src.seqcore import IntegerSequence, QuantizedSequence, SymbolicSequence, TorusSequence

DEFAULT_POWER_BUDGET = 4000


def prng_stream(seed: int, base: int = 2) -> PrngDigitStream:
    """SplitMix64 digits mod `base`"""
    return PrngDigitStream(seed, base)


def fibonacci_word(length: int) -> SymbolicSequence:
    """Prefix of the fixed point of 0 -> 01, 1 -> 0"""
    if length < 1:
        raise UsageError(f"length must be positive, got {length}")
    return SymbolicSequence(fibonacci_symbols(length), 2)


def quadratic_digits(m: int, precision: int) -> QuadraticDigitStream:
    """Binary digits of frac(sqrt(m)); the first `precision` digits are materialised."""
    stream = QuadraticDigitStream(m)
    stream.digits(0, precision)
    return stream


def symbol_stream(stream: DigitStream, length: int) -> SymbolicSequence:
    """The first `length` digits of a stream as a symbolic sequence over its base."""
    return SymbolicSequence(stream.digits(0, length), stream.base)


def base_p_truncation(x_digits: DigitStream, levels_bits: int, n_max: int) -> QuantizedSequence:
    """f_L(n) = sum_{l=1..L} c(n+l) p^(L-l) on the grid p^L.

    c is indexed from 0, so level n reads digits n+1 .. n+L. A J-block of
    f_L reads digits n+1 .. n+L+J-1 and determines it, hence the J-blocks of
    f_L are in bijection with the (L+J-1)-blocks of the stream from position 1.
    """
    if levels_bits < 1 or n_max < 1:
        raise UsageError(f"need L >= 1 and n_max >= 1, got L={levels_bits}, n_max={n_max}")
    p = x_digits.base
    grid = p**levels_bits
    digits = x_digits.digits(0, n_max + levels_bits)
    dtype = np.int64 if grid < 2**62 else object
    digits = digits.astype(dtype)
    levels = np.zeros(n_max, dtype=dtype)
    for l in range(1, levels_bits + 1):
        levels = levels * p + digits[l : l + n_max]
    return QuantizedSequence(levels, grid)


def cumsum(d: IntegerSequence, a0: int = 0) -> IntegerSequence:
    """a(0) = a0, a(n+1) = a(n) + d(n)"""
    return IntegerSequence(tuple(accumulate(d.values, initial=a0)))


def bounded_difference(gap_bound: int, seed: int, length: int) -> IntegerSequence:
    """d(n) uniform on {-L..L} from prng_stream(seed, 2L+1)"""
    if gap_bound < 0:
        raise UsageError(f"gap bound must be non-negative, got {gap_bound}")
    if gap_bound == 0:
        return IntegerSequence((0,) * length)
    digits = prng_stream(seed, 2 * gap_bound + 1).digits(0, length).astype(np.int64) - gap_bound
    return IntegerSequence(tuple(digits.tolist()))


def exm1_sequence(
    p: int,
    pprime: int,
    seed: int,
    n_max: int,
    increments: Optional[IntegerSequence] = None,
    budget: int = DEFAULT_POWER_BUDGET,
) -> IntegerSequence:
    """a(n) = p^n + c(n) with c(0) = 0 and Delta c(n) i.i.d. on {0..p'-1}.

    Args:
    -----
    p: `int`
        Geometric base, at least 2.
    pprime: `int`
        Alphabet of the increments, p' > p^2.
    seed: `int`
        Seed of the increment stream.
    n_max: `int`
        Number of terms.
    increments: `Optional[IntegerSequence]`
        Overrides the random Delta c (length n_max - 1).
    budget: `int`
        Largest n_max accepted.

    Returns:
    --------
    `IntegerSequence`:
        a(0) .. a(n_max-1)
    """
    if p < 2:
        raise UsageError(f"p must be at least 2, got {p}")
    if pprime <= p * p:
        raise UsageError(f"p' must exceed p^2 = {p * p}, got {pprime}")
    if n_max < 1:
        raise UsageError(f"n_max must be positive, got {n_max}")
    if n_max > budget:
        raise ResourceError(f"n_max={n_max} exceeds the power budget {budget}")
    if increments is None:
        steps = prng_stream(seed, pprime).digits(0, n_max - 1).tolist()
    else:
        if len(increments) < n_max - 1:
            raise UsageError(f"need {n_max - 1} increments, got {len(increments)}")
        steps = list(increments.values[: n_max - 1])
    c = accumulate(steps, initial=0)
    return IntegerSequence(tuple(p**n + cn for n, cn in enumerate(c)))


def random_torus(seed: int, length: int, precision: int) -> TorusSequence:
    """Uniform P-bit mantissas from consecutive SplitMix64 words"""
    words_per_value = (precision + 63) // 64
    words = splitmix64(seed, length * words_per_value).reshape(length, words_per_value).tolist()
    drop = 64 * words_per_value - precision
    mantissas = []
    for row in words:
        value = 0
        for word in row:
            value = (value << 64) | int(word)
        mantissas.append(value >> drop)
    return TorusSequence(tuple(mantissas), precision)


def load_symbols(path: str | Path) -> SymbolicSequence:
    """Reads one non-negative integer symbol per line; '#' starts a comment."""
    try:
        values = np.loadtxt(path, dtype=np.int64, ndmin=1, comments="#")
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read symbols from {path}: {e}") from e
    if values.size == 0:
        raise SequenceError(f"{path} holds no symbols")
    if values.min() < 0:
        raise SequenceError(f"{path} holds a negative symbol")
    return SymbolicSequence(values, int(values.max()) + 1)
