"""Pointwise operators on torus sequences in dyadic fixed point.

Every value is a mantissa m meaning m / 2^P. Sums and differences wrap
modulo 2^P and are exact; products a * x with a real x read from a binary
digit stream are rounded to the nearest mantissa after G guard bits.
"""

from typing import Dict

from src.api.errors import EmptyOutputError, InsufficientPrecisionError, UsageError
from src.seqcore.sequences import (
    BinaryDigits,
    IntegerSequence,
    QuantizedSequence,
    SymbolicSequence,
    TorusSequence,
)

DEFAULT_GUARD_BITS = 32


def torus_distance(u: int, v: int, precision: int) -> int:
    """Distance min(|u-v|, 1-|u-v|) between two mantissas, in units of 2^-P."""
    modulus = 1 << precision
    gap = (u - v) % modulus
    return min(gap, modulus - gap)


def difference(x: TorusSequence, d: int) -> TorusSequence:
    """x_d(n) = x(n+d) - x(n) mod 1.

    Args:
    -----
    x: `TorusSequence`
        Input sequence.
    d: `int`
        Positive shift, smaller than `len(x)`.

    Returns:
    --------
    `TorusSequence`:
        Sequence of length `len(x) - d` at the same precision.
    """
    if d < 1:
        raise UsageError(f"shift must be positive, got {d}")
    if d >= len(x):
        raise EmptyOutputError(f"shift {d} leaves nothing of a sequence of length {len(x)}")
    mask = x.modulus - 1
    m = x.mantissas
    return TorusSequence(tuple((m[n + d] - m[n]) & mask for n in range(len(m) - d)), x.precision)


def iterated_difference(x: TorusSequence, k: int) -> TorusSequence:
    """k-fold first difference"""
    if k < 1:
        raise UsageError(f"order must be positive, got {k}")
    if k >= len(x):
        raise EmptyOutputError(f"order {k} leaves nothing of a sequence of length {len(x)}")
    for _ in range(k):
        x = difference(x, 1)
    return x


def quantize(x: TorusSequence, grid: int) -> QuantizedSequence:
    """Nearest grid index under torus distance.

    A value exactly half way between two grid points goes to the lower
    index; half way between (N-1)/N and 0 goes to 0.
    """
    if grid < 2:
        raise UsageError(f"grid must be at least 2, got {grid}")
    precision = x.precision
    modulus = x.modulus
    low_mask = modulus - 1
    levels = []
    for m in x.mantissas:
        scaled = m * grid
        level = scaled >> precision
        twice_remainder = (scaled & low_mask) << 1
        if twice_remainder > modulus or (twice_remainder == modulus and level == grid - 1):
            level += 1
        levels.append(level % grid)
    return QuantizedSequence(levels, grid)


def _require_binary(x_digits: BinaryDigits) -> None:
    if x_digits.base != 2:
        raise UsageError(f"torus products need a binary digit stream, got base {x_digits.base}")


def _round_product(a: int, prefix: int, width: int, precision: int) -> int:
    """Nearest P-bit mantissa of (a * prefix mod 2^width) / 2^width; ties round up."""
    shift = width - precision
    product = (a * prefix) & ((1 << width) - 1)
    return ((product + (1 << (shift - 1))) >> shift) & ((1 << precision) - 1)


def _signed_product(a: int, prefix: int, prefix_width: int, precision: int, guard: int) -> int:
    magnitude = abs(a)
    if magnitude == 0:
        return 0
    width = magnitude.bit_length() + precision + guard
    mantissa = _round_product(magnitude, prefix >> (prefix_width - width), width, precision)
    if a < 0:
        return (-mantissa) & ((1 << precision) - 1)
    return mantissa


def mul_mod1(a: int, x_digits: BinaryDigits, precision: int, guard: int = DEFAULT_GUARD_BITS) -> int:
    """frac(a * x) as a P-bit mantissa, within 2^-P of the true value.

    Multiplies `a` with the integer formed by the first bitlen(a) + P + G
    digits of x and keeps the fractional part, rounded to P bits.

    Args:
    -----
    a: `int`
        Non-negative multiplier.
    x_digits: `BinaryDigits`
        Binary digit stream of x in [0, 1).
    precision: `int`
        Output precision P in bits.
    guard: `int`
        Extra digits read beyond bitlen(a) + P.

    Returns:
    --------
    `int`:
        Mantissa in [0, 2^P).

    Raises:
    -------
    `InsufficientPrecisionError`:
        The stream ends before bitlen(a) + P + G digits.
    """
    if a < 0:
        raise UsageError("mul_mod1 takes a non-negative multiplier; reflect negatives first")
    if precision < 1:
        raise UsageError(f"precision must be positive, got {precision}")
    _require_binary(x_digits)
    if a == 0:
        return 0
    width = a.bit_length() + precision + guard
    return _round_product(a, x_digits.prefix_int(width), width, precision)


def scalar_sequence(
    a: IntegerSequence,
    x_digits: BinaryDigits,
    precision: int,
    guard: int = DEFAULT_GUARD_BITS,
) -> TorusSequence:
    """a_x(n) = a(n) x mod 1, element-wise `mul_mod1`.

    Negative a(n) give the reflection 1 - frac(|a(n)| x) mod 1.
    """
    _require_binary(x_digits)
    if len(a) == 0:
        return TorusSequence((), precision)
    widest = max(abs(v) for v in a.values).bit_length() + precision + guard
    prefix = x_digits.prefix_int(widest)
    return TorusSequence(
        tuple(_signed_product(v, prefix, widest, precision, guard) for v in a.values),
        precision,
    )


def geometric_mod1(
    p: int,
    x_digits: BinaryDigits,
    length: int,
    precision: int,
    guard: int = DEFAULT_GUARD_BITS,
) -> TorusSequence:
    """p^n x mod 1 for n < length through y <- p*y mod 2^K.

    K covers bitlen(p^(length-1)) + P + G digits, so each value carries the
    same error bound as `mul_mod1(p**n, ...)` while the cost per step is a
    single small multiplication of the running residue.
    """
    _require_binary(x_digits)
    if p < 2:
        raise UsageError(f"base must be at least 2, got {p}")
    if length < 1:
        return TorusSequence((), precision)
    width = (p ** (length - 1)).bit_length() + precision + guard
    mask = (1 << width) - 1
    y = x_digits.prefix_int(width)
    mantissas = []
    for _ in range(length):
        mantissas.append(_round_product(1, y, width, precision))
        y = (y * p) & mask
    return TorusSequence(tuple(mantissas), precision)


def symbolize(x: TorusSequence) -> SymbolicSequence:
    """Relabels distinct torus values as dense symbols, ordered by value."""
    return SymbolicSequence.dense(list(x.mantissas))


def encode_scaled_differences(
    delta: IntegerSequence,
    x_digits: BinaryDigits,
    precision: int,
    guard: int = DEFAULT_GUARD_BITS,
) -> SymbolicSequence:
    """Exact symbolic encoding of Delta a(n) * x mod 1.

    Each distinct gap value j is multiplied once; the map j -> j x mod 1 must
    stay injective at precision P, otherwise the encoding would merge blocks.

    Raises:
    -------
    `InsufficientPrecisionError`:
        Two distinct gap values collide at P bits.
    """
    _require_binary(x_digits)
    distinct = sorted(set(delta.values))
    if not distinct:
        raise EmptyOutputError("no gaps to encode")
    widest = max(abs(v) for v in distinct).bit_length() + precision + guard
    prefix = x_digits.prefix_int(widest)
    image: Dict[int, int] = {
        value: _signed_product(value, prefix, widest, precision, guard) for value in distinct
    }
    if len(set(image.values())) != len(image):
        raise InsufficientPrecisionError(
            f"gap values collide at {precision} bits; raise the precision"
        )
    return SymbolicSequence.dense([image[v] for v in delta.values])
