from fractions import Fraction
from itertools import product
from math import log

import numpy as np
import pytest
from numpy.lib.stride_tricks import sliding_window_view

from src.api.errors import RefusalError, SearchBudgetError, SequenceError, UsageError
from src.numtheory import (
    GapBlock,
    admissible_mask,
    block_code,
    count_admissible,
    covering_primes,
    gap_block_construct,
    is_admissible,
    mobius_of,
    mobius_sieve,
    primes_upto,
    squarefree_enumerate,
)
from src.seqcore import mul_mod1
from .fixtures import mobius_table, sqrt2


# -------------------------
# sieves
# -------------------------

def test_primes_upto_thirty():
    assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("n, mu", [(0, 0), (1, 1), (2, -1), (4, 0), (6, 1), (12, 0), (30, -1), (97, -1)])
def test_mobius_values(mobius_table, n, mu):
    assert mobius_table[n] == mu
    assert mobius_of(n) == mu


def test_sieve_agrees_with_trial_division():
    table = mobius_sieve(3000)

    assert table.mu.tolist() == [mobius_of(n) for n in range(3001)]


def test_mertens_at_ten_thousand(mobius_table):
    assert mobius_table.mertens(10_000) == -23


def test_squarefree_density(mobius_table):
    assert int(mobius_table.squared()[1:].sum()) == 607926


def test_mertens_beyond_table(mobius_table):
    with pytest.raises(UsageError):
        mobius_table.mertens(mobius_table.limit + 1)


def test_value_beyond_table_uses_trial_division():
    table = mobius_sieve(10)

    assert table.value(15) == 1
    assert table.value(18) == 0


def test_squarefree_enumerate():
    assert squarefree_enumerate(30).values == (1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30)


def test_squarefree_enumeration_increases(mobius_table):
    assert squarefree_enumerate(100_000, mobius_table).is_increasing()


def test_sieve_rejects_zero_limit():
    with pytest.raises(UsageError):
        mobius_sieve(0)


# -------------------------
# admissible blocks
# -------------------------

@pytest.mark.parametrize(
    "block, expected",
    [
        ((1, 1, 1), True),
        ((1, 1, 1, 1), False),
        ((1, 1, 1, 0), True),
        ((1, 0, 1, 0, 1), True),
        ((1,) * 9, False),
        ((1, 1, 0, 1, 1, 1, 0, 1, 1), True),
    ],
)
def test_is_admissible(block, expected):
    assert is_admissible(block) == expected


def test_covering_primes():
    assert covering_primes(3) == []
    assert covering_primes(9) == [2, 3]
    assert covering_primes(24) == [2, 3]
    assert covering_primes(25) == [2, 3, 5]


@pytest.mark.parametrize("length, count", [(1, 2), (3, 8), (4, 15), (8, 175)])
def test_count_admissible(length, count):
    assert count_admissible(length) == count


def test_admissible_entropy_decreases_inside_band():
    entropies = [log(count_admissible(J)) / J for J in (8, 12, 16, 20)]

    assert all(a > b for a, b in zip(entropies, entropies[1:]))
    assert all(0.421383 < h < log(2) for h in entropies)


def test_count_admissible_refuses_long_blocks():
    with pytest.raises(RefusalError):
        count_admissible(25)


def test_packed_mask_matches_block_check():
    length = 10
    blocks = list(product((0, 1), repeat=length))
    codes = np.array([block_code(b) for b in blocks], dtype=np.uint64)

    assert admissible_mask(codes, length).tolist() == [is_admissible(b) for b in blocks]


def test_squarefree_blocks_are_admissible(mobius_table):
    bits = mobius_table.squared()[1:200_001].astype(np.int64)
    length = 16
    codes = sliding_window_view(bits, length) @ (1 << np.arange(length - 1, -1, -1, dtype=np.int64))

    assert admissible_mask(np.unique(codes), length).all()


# -------------------------
# gap blocks
# -------------------------

def test_gap_block_positions():
    block = GapBlock((2, 1, 3))

    assert block.support_positions == (0, 2, 3, 6)
    assert block.support_block == (1, 0, 1, 1, 0, 0, 1)


def test_gap_block_rejects_zero_gap():
    with pytest.raises(SequenceError):
        GapBlock((1, 0))


def test_single_gap_is_the_first_hit(sqrt2):
    """frac(sqrt 2) = 0.414... already lies in (0.4, 0.6)"""
    assert gap_block_construct(sqrt2, [(0.4, 0.6)]).gaps == (1,)


def test_empty_interval_list_gives_single_point(sqrt2):
    block = gap_block_construct(sqrt2, [])

    assert block.gaps == ()
    assert block.support_block == (1,)


def test_constructed_gaps_land_in_their_intervals(sqrt2):
    intervals = [(0.1, 0.3), (0.6, 0.7), (0.2, 0.25), (0.8, 0.9), (0.45, 0.55), (0.0, 0.5), (0.3, 0.4), (0.7, 0.95)]
    block = gap_block_construct(sqrt2, intervals)

    assert len(block.gaps) == len(intervals)
    assert is_admissible(block.support_block)
    for d, (low, high) in zip(block.gaps, intervals):
        value = Fraction(mul_mod1(d, sqrt2, 64), 1 << 64)
        assert Fraction(low) < value < Fraction(high)


def random_intervals(seed: int) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    intervals = []
    for _ in range(int(rng.integers(1, 9))):
        width = float(rng.uniform(0.05, 0.3))
        low = float(rng.uniform(0.0, 1.0 - width))
        intervals.append((low, low + width))
    return intervals


@pytest.mark.parametrize("seed", range(20))
def test_random_intervals_give_admissible_blocks(sqrt2, seed):
    intervals = random_intervals(seed)
    block = gap_block_construct(sqrt2, intervals)

    assert is_admissible(block.support_block)
    for d, (low, high) in zip(block.gaps, intervals):
        value = Fraction(mul_mod1(d, sqrt2, 64), 1 << 64)
        assert Fraction(low) < value < Fraction(high)


def test_support_points_after_third_gap_sit_on_multiples_of_four(sqrt2):
    block = gap_block_construct(sqrt2, [(0.2, 0.8)] * 7)

    assert all(s % 4 == 0 for s in block.support_positions[3:])


def test_search_budget(sqrt2):
    with pytest.raises(SearchBudgetError):
        gap_block_construct(sqrt2, [(0.9, 0.95)], max_scan=1)


def test_interval_must_be_ordered(sqrt2):
    with pytest.raises(UsageError):
        gap_block_construct(sqrt2, [(0.6, 0.4)])
