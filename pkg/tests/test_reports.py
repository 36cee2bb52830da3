import pytest

from src.api.errors import InvariantViolationError
from src.expcli import DualEntropyRecord, DualEntropyReport, PartialSumCheckpoint, PartialSumReport


def record(sample: int, J: int, entropy: float, truncation=None, digits=None) -> DualEntropyRecord:
    return DualEntropyRecord(sample, f"prng:{sample}", 16, J, 1, entropy, truncation, digits)


# -------------------------
# partial sums
# -------------------------

def test_checkpoint_averages():
    checkpoint = PartialSumCheckpoint(limit=100, sum_a_mu=25, sum_delta_mu=-2, sum_abs_mu=60)

    assert checkpoint.average_a_mu == 0.25
    assert checkpoint.average_delta_mu == -0.02
    assert checkpoint.third_abs_mu == 0.2


def test_checkpoints_must_increase():
    with pytest.raises(InvariantViolationError):
        PartialSumReport((PartialSumCheckpoint(10, 0, 0, 0), PartialSumCheckpoint(10, 0, 0, 0)))


def test_report_needs_a_checkpoint():
    with pytest.raises(InvariantViolationError):
        PartialSumReport(())


def test_partial_sum_frame():
    report = PartialSumReport((PartialSumCheckpoint(10, 2, 0, 6), PartialSumCheckpoint(20, 5, 1, 12)))

    assert report.final.limit == 20
    assert list(report.to_frame().columns) == ["N", "avg_a_mu", "avg_delta_a_mu", "third_avg_abs_mu"]


# -------------------------
# dual entropy
# -------------------------

def test_spread_across_samples():
    report = DualEntropyReport((record(0, 1, 0.5), record(1, 1, 0.75), record(0, 2, 0.4), record(1, 2, 0.4)))

    assert report.spread(1) == 0.25
    assert report.spread(2) == 0.0
    assert report.spread(3) == 0.0
    assert report.to_frame()["spread_nats"].tolist() == [0.25, 0.25, 0.0, 0.0]


def test_digit_identity_columns_only_when_present():
    plain = DualEntropyReport((record(0, 1, 0.5),))
    with_digits = DualEntropyReport((record(0, 1, 0.5, truncation=4, digits=4), record(0, 2, 0.5, truncation=5, digits=6)))

    assert not plain.has_digit_identity
    assert "truncation_count_all" not in plain.to_frame().columns
    assert with_digits.has_digit_identity
    assert not with_digits.digit_identity_holds()
    assert str(with_digits.to_frame()["digit_count_all"].dtype) == "Int64"
