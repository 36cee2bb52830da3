from fractions import Fraction
from itertools import accumulate

import pytest

from src.api.errors import (
    EmptyOutputError,
    InsufficientPrecisionError,
    SequenceError,
    UsageError,
)
from src.generators import FibonacciDigitStream, RationalDigitStream, parse_digit_stream, random_torus
from src.seqcore import (
    IntegerSequence,
    QuantizedSequence,
    SymbolicSequence,
    TorusSequence,
    difference,
    encode_scaled_differences,
    geometric_mod1,
    iterated_difference,
    mul_mod1,
    quantize,
    reconstruct,
    scalar_sequence,
    sup_torus_error,
    symbolize,
    torus_distance,
)
from .fixtures import sqrt2


def rotation(length: int, precision: int = 64) -> TorusSequence:
    """n * frac(sqrt 2) mod 1"""
    alpha = parse_digit_stream("sqrt:2").prefix_int(precision)
    return TorusSequence.from_polynomial([0, alpha], length, precision)


def torus_gap(mantissa: int, precision: int, exact: Fraction) -> Fraction:
    gap = (Fraction(mantissa, 1 << precision) - exact) % 1
    return min(gap, 1 - gap)


# -------------------------
# sequence types
# -------------------------

def test_symbol_outside_alphabet_is_rejected():
    with pytest.raises(SequenceError):
        SymbolicSequence([0, 1, 2], 2)


def test_empty_symbolic_sequence_is_rejected():
    with pytest.raises(SequenceError):
        SymbolicSequence([], 2)


def test_dense_relabels_by_magnitude():
    seq = SymbolicSequence.dense([-5, 7, -5, 100])

    assert seq.tolist() == [0, 1, 0, 2]
    assert seq.alphabet_size == 3


def test_symbols_are_read_only():
    seq = SymbolicSequence([0, 1], 2)

    with pytest.raises(ValueError):
        seq.symbols[0] = 1


def test_mantissa_out_of_range_is_rejected():
    with pytest.raises(SequenceError):
        TorusSequence((1 << 8,), 8)


def test_from_floats_wraps_mod_one():
    x = TorusSequence.from_floats([1.25, -0.25], 8)

    assert x.mantissas == (64, 192)


def test_level_outside_grid_is_rejected():
    with pytest.raises(SequenceError):
        QuantizedSequence([0, 10], 10)


def test_torus_distance_wraps():
    assert torus_distance(1, (1 << 16) - 1, 16) == 2
    assert torus_distance(5, 5, 16) == 0


# -------------------------
# differences
# -------------------------

def test_difference_of_constant_is_zero():
    x = TorusSequence.constant(12345, 10, 16)

    assert set(difference(x, 3).mantissas) == {0}


def test_difference_wraps_in_fixed_point():
    """(0.1, 0.5, 0.9, 0.2) at 16 bits gives (0.4, 0.4, 0.3)"""
    x = TorusSequence.from_floats([0.1, 0.5, 0.9, 0.2], 16)

    assert difference(x, 1).mantissas == (26214, 26214, 19661)


def test_difference_of_rotation_is_constant():
    x = rotation(200)

    assert set(difference(x, 2).mantissas) == {(2 * x[1]) % x.modulus}


def test_difference_too_long_shift():
    with pytest.raises(EmptyOutputError):
        difference(rotation(5), 5)


def test_difference_rejects_zero_shift():
    with pytest.raises(UsageError):
        difference(rotation(5), 0)


def test_second_difference_of_rotation_vanishes():
    assert set(iterated_difference(rotation(100), 2).mantissas) == {0}


def test_second_difference_of_quadratic_phase():
    """n^2 / 7 has constant second difference 2/7"""
    precision = 30
    beta = RationalDigitStream(1, 7).prefix_int(precision)
    x = TorusSequence.from_polynomial([0, 0, beta], 50, precision)

    assert set(iterated_difference(x, 2).mantissas) == {(2 * beta) % (1 << precision)}


def test_first_iterated_difference_is_difference():
    x = random_torus(3, 40, 32)

    assert iterated_difference(x, 1) == difference(x, 1)


def test_difference_prefix_sums_rebuild_sequence():
    x = random_torus(11, 500, 48)
    steps = difference(x, 1).mantissas
    rebuilt = tuple(v % x.modulus for v in accumulate(steps, initial=x[0]))

    assert rebuilt == x.mantissas


# -------------------------
# quantize
# -------------------------

@pytest.mark.parametrize(
    "value, grid, level",
    [(0.26, 10, 3), (0.97, 10, 0), (0.25, 2, 0), (0.75, 2, 0), (0.04, 10, 0), (0.15, 4, 1)],
)
def test_quantize_examples(value, grid, level):
    x = TorusSequence.from_floats([value], 32)

    assert quantize(x, grid).tolist() == [level]


def test_quantize_error_is_at_most_half_a_step():
    x = random_torus(5, 2000, 40)
    for grid in (2, 3, 10, 17, 256):
        assert sup_torus_error(x, quantize(x, grid)) <= Fraction(1, 2 * grid)


def test_quantize_rejects_grid_one():
    with pytest.raises(UsageError):
        quantize(rotation(3), 1)


# -------------------------
# products mod 1
# -------------------------

def test_three_thirds_is_zero():
    assert mul_mod1(3, RationalDigitStream(1, 3), 40) == 0


@pytest.mark.parametrize("a", [0, 1, 2, 3, 7, 1000, 2**70 + 5])
def test_mul_mod1_error_below_one_ulp(a):
    precision = 48
    m = mul_mod1(a, RationalDigitStream(5, 7), precision)

    assert torus_gap(m, precision, Fraction(5 * a % 7, 7)) < Fraction(1, 1 << precision)


def test_power_of_two_reads_the_shifted_window():
    stream = FibonacciDigitStream()
    precision, k = 32, 17
    window = stream.prefix_int(k + precision + 1) & ((1 << (precision + 1)) - 1)

    assert mul_mod1(1 << k, stream, precision) == ((window + 1) >> 1) & ((1 << precision) - 1)


def test_mul_mod1_rejects_negative_multiplier(sqrt2):
    with pytest.raises(UsageError):
        mul_mod1(-1, sqrt2, 32)


def test_scalar_sequence_of_half_alternates():
    x = scalar_sequence(IntegerSequence(range(6)), RationalDigitStream(1, 2), 16)

    assert x.mantissas == (0, 1 << 15, 0, 1 << 15, 0, 1 << 15)


def test_scalar_sequence_of_zeros(sqrt2):
    assert set(scalar_sequence(IntegerSequence((0,) * 5), sqrt2, 32).mantissas) == {0}


def test_scalar_sequence_reflects_negative_multipliers(sqrt2):
    x = scalar_sequence(IntegerSequence((3, -3)), sqrt2, 32)

    assert (x[0] + x[1]) % x.modulus == 0


def test_geometric_matches_scalar_sequence(sqrt2):
    powers = IntegerSequence(tuple(2**n for n in range(60)))
    direct = scalar_sequence(powers, sqrt2, 40)
    recurrent = geometric_mod1(2, sqrt2, 60, 40)

    assert all(torus_distance(u, v, 40) <= 1 for u, v in zip(direct.mantissas, recurrent.mantissas))


def test_scaled_difference_encoding_keeps_block_structure(sqrt2):
    delta = IntegerSequence((1, 2, 1, -1, 2, 0, 1))
    encoded = encode_scaled_differences(delta, sqrt2, 64).tolist()

    for i in range(len(delta)):
        for j in range(len(delta)):
            assert (encoded[i] == encoded[j]) == (delta[i] == delta[j])


def test_scaled_difference_collision_is_reported():
    """0 * 1/2 and 2 * 1/2 land on the same point"""
    with pytest.raises(InsufficientPrecisionError):
        encode_scaled_differences(IntegerSequence((0, 2)), RationalDigitStream(1, 2), 32)


def test_symbolize_orders_by_value():
    x = TorusSequence((9, 3, 9, 200), 8)

    assert symbolize(x).tolist() == [1, 0, 1, 2]


# -------------------------
# reconstruct
# -------------------------

def test_reconstruct_rotation_error():
    g, f = reconstruct(rotation(10_000), 1, 10)

    assert sup_torus_error(rotation(10_000), g) <= Fraction(1, 5)
    assert g.grid == f.grid == 100


def test_reconstruct_random_sequence_with_step_three():
    x = random_torus(7, 5000, 64)
    g, _ = reconstruct(x, 3, 12)

    assert sup_torus_error(x, g) <= Fraction(2, 12)


def test_reconstruct_constant_sequence():
    x = TorusSequence.from_floats([0.3] * 300, 32)
    g, f = reconstruct(x, 2, 10)

    assert len(set(g.tolist())) == 1
    assert set(f.tolist()) == {0}
    assert sup_torus_error(x, g) <= Fraction(1, 100)


def test_reconstruct_too_short():
    with pytest.raises(UsageError):
        reconstruct(rotation(30), 3, 10)


def test_reconstruct_step_larger_than_grid():
    with pytest.raises(UsageError):
        reconstruct(rotation(300), 5, 4)
