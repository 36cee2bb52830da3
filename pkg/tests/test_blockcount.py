from math import log

import pytest

from src.api.errors import UsageError
from src.api.undefined import UNDEFINED
from src.blockcount import (
    SuffixAutomaton,
    census,
    census_automaton,
    census_naive,
    census_packed,
    entropy_curve,
    make_engine,
    quantized_census,
)
from src.blockcount import automaton as automaton_module
from src.seqcore import QuantizedSequence, SymbolicSequence, TorusSequence
from .fixtures import fibonacci_prefix, random_sequences, random_symbols


def counts(result) -> list[int]:
    return [r.count_all for r in result.records]


# -------------------------
# engine agreement
# -------------------------

def test_engines_agree_on_random_sequences(random_sequences):
    for seq in random_sequences:
        j_max = min(12, len(seq))
        naive = census_naive(seq, j_max)
        packed = census_packed(seq, j_max)
        automaton = census_automaton(seq, j_max)

        assert naive.records == packed.records
        assert counts(automaton) == counts(naive)


def test_byte_row_fallback_agrees_with_naive():
    """16^J passes the packed key range from J = 16 on"""
    seq = random_symbols(99, 16, 400)

    assert census_packed(seq, 20).records == census_naive(seq, 20).records


def test_threads_do_not_change_the_census():
    seq = random_symbols(5, 3, 5000)

    assert census_packed(seq, 14, threads=4) == census_packed(seq, 14, threads=1)


def test_dict_transitions_agree_with_table(monkeypatch):
    seq = random_symbols(17, 5, 2000)
    expected = SuffixAutomaton(seq.tolist(), 5).distinct_factor_counts(10)

    monkeypatch.setattr(automaton_module, "_TABLE_SLOTS", 0)
    actual = SuffixAutomaton(seq.tolist(), 5).distinct_factor_counts(10)

    assert actual.tolist() == expected.tolist()


def test_automaton_leaves_regular_counts_undefined():
    result = census_automaton(random_symbols(1, 2, 100), 4)

    assert result.tau is UNDEFINED
    assert all(r.count_regular is UNDEFINED for r in result.records)
    assert result.to_frame()["count_regular"].isna().all()


def test_unknown_engine():
    with pytest.raises(UsageError):
        make_engine("radix")


# -------------------------
# known complexities
# -------------------------

def test_fibonacci_word_is_sturmian(fibonacci_prefix):
    result = census(fibonacci_prefix, 20)

    assert counts(result) == [J + 1 for J in range(1, 21)]


def test_de_bruijn_word_holds_every_triple():
    seq = SymbolicSequence([int(c) for c in "0001011100"], 2)

    assert census(seq, 3).count_all(3) == 8


def test_constant_sequence_has_zero_entropy():
    seq = SymbolicSequence([0] * 50, 2)
    result = census(seq, 10)

    assert counts(result) == [1] * 10
    assert all(h == 0.0 for _, h, _ in entropy_curve(result))


def test_counts_never_exceed_window_count():
    seq = random_symbols(3, 4, 30)
    result = census(seq, 30)

    assert result.count_all(30) == 1
    assert result.violations() == []


def assert_counts_grow_submultiplicatively(seq: SymbolicSequence, j_max: int) -> None:
    result = census(seq, j_max)
    count = {J: result.count_all(J) for J in range(1, j_max + 1)}

    for J in range(1, j_max):
        assert count[J + 1] <= seq.alphabet_size * count[J]
    for J1 in range(1, j_max):
        for J2 in range(1, j_max - J1 + 1):
            # ln c(J1+J2) <= ln c(J1) + ln c(J2)
            assert count[J1 + J2] <= count[J1] * count[J2]


def test_counts_grow_submultiplicatively_on_random_sequences(random_sequences):
    for seq in random_sequences:
        assert_counts_grow_submultiplicatively(seq, min(12, len(seq)))


def test_counts_grow_submultiplicatively_on_fibonacci_word(fibonacci_prefix):
    assert_counts_grow_submultiplicatively(fibonacci_prefix, 20)


def test_tau_one_makes_every_block_effective():
    seq = random_symbols(8, 3, 500)
    result = census(seq, 8, tau=1)

    assert all(r.count_effective == r.count_all for r in result.records)
    assert all(r.count_effective_regular == r.count_regular for r in result.records)


def test_effective_counts_shrink_with_tau():
    seq = random_symbols(8, 3, 500)
    low, high = census(seq, 8, tau=2), census(seq, 8, tau=5)

    assert all(a.count_effective >= b.count_effective for a, b in zip(low.records, high.records))


def test_regular_blocks_tile_the_prefix():
    """0011 0011 0011: one regular 4-block but four distinct 4-blocks"""
    seq = SymbolicSequence([0, 0, 1, 1] * 3, 2)
    record = census(seq, 4).record(4)

    assert record.count_regular == 1
    assert record.count_all == 4


# -------------------------
# entropies and frames
# -------------------------

def test_entropy_is_in_nats():
    seq = SymbolicSequence([int(c) for c in "0001011100"], 2)
    result = census(seq, 3)

    assert result.entropy_all(3) == pytest.approx(log(8) / 3)


def test_entropy_curve_lists_every_length():
    result = census(random_symbols(2, 2, 200), 6)
    curve = entropy_curve(result)

    assert [J for J, _, _ in curve] == list(range(1, 7))
    assert curve[0][1] == pytest.approx(log(2))


def test_frame_columns():
    frame = census(random_symbols(2, 2, 200), 5).to_frame()

    assert list(frame.columns) == [
        "J",
        "count_all",
        "count_regular",
        "count_effective",
        "count_effective_regular",
        "entropy_all_nats",
        "entropy_regular_nats",
    ]
    assert str(frame["count_all"].dtype) == "Int64"
    assert len(frame) == 5


def test_record_outside_census():
    with pytest.raises(UsageError):
        census(random_symbols(2, 2, 50), 5).record(6)


# -------------------------
# request checks
# -------------------------

@pytest.mark.parametrize("engine", ["naive", "packed", "automaton"])
def test_jmax_longer_than_sequence(engine):
    with pytest.raises(UsageError):
        census(random_symbols(0, 2, 10), 11, engine=engine)


def test_jmax_zero():
    with pytest.raises(UsageError):
        census(random_symbols(0, 2, 10), 0)


def test_tau_zero():
    with pytest.raises(UsageError):
        census(random_symbols(0, 2, 10), 3, tau=0)


# -------------------------
# quantized census
# -------------------------

def test_alternating_values_on_two_cells():
    x = TorusSequence.from_floats([0.1, 0.6] * 50, 16)
    result = quantized_census(x, 4, grid=2)

    assert counts(result) == [2, 2, 2, 2]


def test_quantized_input_keeps_its_grid():
    levels = QuantizedSequence([0, 3, 7, 3, 0], 8)

    assert quantized_census(levels, 2).count_all(1) == 3
    with pytest.raises(UsageError):
        quantized_census(levels, 2, grid=16)


def test_torus_input_needs_a_grid():
    with pytest.raises(UsageError):
        quantized_census(TorusSequence.from_floats([0.1, 0.2], 8), 1)
