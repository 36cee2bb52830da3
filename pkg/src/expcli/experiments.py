import asyncio
from abc import ABC, abstractmethod
from fractions import Fraction
from math import log, pi
from time import perf_counter
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from src.api import LoggingProvider, Verdict
from src.api.errors import InvariantViolationError, RefusalError, UsageError
from src.blockcount import BlockCensus, census, quantized_census
from src.generators import (
    DigitStream,
    base_p_truncation,
    bounded_difference,
    cumsum,
    exm1_sequence,
    parse_digit_stream,
    sarnak_build,
)
from src.numtheory import (
    MAX_EXHAUSTIVE_LENGTH,
    admissible_mask,
    count_admissible,
    mobius_sieve,
    squarefree_enumerate,
)
from src.seqcore import (
    IntegerSequence,
    QuantizedSequence,
    SymbolicSequence,
    encode_scaled_differences,
    geometric_mod1,
    reconstruct,
    scalar_sequence,
    sup_torus_error,
)
from src.utils import logging_provider as default_logging_provider

from .config import EncodingKind, ExperimentConfig, ExperimentType
from .reports import (
    DualEntropyRecord,
    DualEntropyReport,
    ExperimentResult,
    PartialSumCheckpoint,
    PartialSumReport,
)
from .sources import support_indicator, symbolic_source, torus_source, x_streams

SQUAREFREE_REFERENCE_NATS = 6 / pi**2 * log(2)
SARNAK_REFERENCE = 2 / pi**2
SQFREE_DECREASING_AT = (8, 12, 16, 20)
GAP_CENSUS_JMAX = 8
SARNAK_MIN_LIMIT = 100_000
DUAL_FAMILIES = ("bounded-diff", "geometric", "exm1")


def _entropy(count: int, length: int) -> float:
    return log(count) / length


class ExperimentABC(ABC):
    """One named experiment; `run` builds the table, summary and verdict."""

    def __init__(
        self,
        config: ExperimentConfig,
        logging_provider: LoggingProvider = default_logging_provider,
    ) -> None:
        self.config = config
        self.log = logging_provider(__name__, self)

    @property
    @abstractmethod
    def experiment_type(self) -> ExperimentType: ...

    @abstractmethod
    async def run(self) -> ExperimentResult:
        """Runs the experiment.

        Returns:
        --------
        `ExperimentResult`:
            Rows, summary and, for verdict-bearing experiments, the verdict.
        """
        ...

    def census(self, sequence: SymbolicSequence, j_max: int, threads: Optional[int] = None) -> BlockCensus:
        """Census with the configured engine, tau and thread count"""
        started = perf_counter()
        result = census(
            sequence,
            j_max,
            self.config.tau,
            self.config.engine,
            self.config.threads if threads is None else threads,
        )
        violations = result.violations()
        if violations:
            raise InvariantViolationError("; ".join(violations))
        self.log.debug(f"census of {len(sequence)} symbols to J={j_max} in {perf_counter() - started:.2f}s")
        return result

    def result(self, frame: pd.DataFrame, summary: dict, verdict: Optional[Verdict] = None, **metadata) -> ExperimentResult:
        return ExperimentResult(self.experiment_type, frame, summary, verdict, metadata)


# ----------------------------------------------------------------------------
# block entropy of one sequence
# ----------------------------------------------------------------------------


class EntropyExperiment(ExperimentABC):
    COLUMNS = ["J", "count_all", "count_regular", "count_effective", "entropy_all_nats", "entropy_regular_nats"]

    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.ENTROPY

    async def run(self) -> ExperimentResult:
        sequence = await asyncio.to_thread(symbolic_source, self.config)
        block_census = await asyncio.to_thread(self.census, sequence, self.config.jmax)
        summary = {
            "length": len(sequence),
            "alphabet_size": sequence.alphabet_size,
            "engine": block_census.engine,
        }
        return self.result(block_census.to_frame()[self.COLUMNS], summary)


# ----------------------------------------------------------------------------
# bounded differences: d against the encoding of Delta a_x
# ----------------------------------------------------------------------------


class VdcExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.VDC

    def _censuses(self) -> Tuple[BlockCensus, BlockCensus]:
        c = self.config
        d = bounded_difference(c.gap_bound, c.seed, c.length)
        a = cumsum(d)
        encoded = encode_scaled_differences(a.delta(), parse_digit_stream(c.x), c.precision, c.guard)
        return self.census(SymbolicSequence.dense(d.values), c.jmax), self.census(encoded, c.jmax)

    async def run(self) -> ExperimentResult:
        d_census, encoded_census = await asyncio.to_thread(self._censuses)
        rows = []
        for d_record, x_record in zip(d_census.records, encoded_census.records):
            rows.append(
                {
                    "J": d_record.length,
                    "count_d": d_record.count_all,
                    "count_delta_a_x": x_record.count_all,
                    "entropy_d_nats": d_record.entropy_all,
                    "entropy_delta_a_x_nats": x_record.entropy_all,
                    "equal": d_record.count_all == x_record.count_all,
                }
            )
        frame = pd.DataFrame(rows)
        ok = bool(frame["equal"].all())
        summary = {"gap_symbols": d_census.alphabet_size, "encoded_symbols": encoded_census.alphabet_size}
        return self.result(frame, summary, Verdict.of(ok))


# ----------------------------------------------------------------------------
# square-free indicator against admissible blocks
# ----------------------------------------------------------------------------


def observed_block_codes(bits: np.ndarray, length: int) -> np.ndarray:
    """Distinct J-windows of a 0/1 array as integers, first position most significant"""
    weights = np.left_shift(1, np.arange(length - 1, -1, -1, dtype=np.int64))
    return np.unique(sliding_window_view(bits.astype(np.int64), length) @ weights)


class SqfreeExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.SQFREE

    def _rows(self) -> Tuple[pd.DataFrame, dict]:
        c = self.config
        if c.jmax > MAX_EXHAUSTIVE_LENGTH:
            raise RefusalError(f"J_max = {c.jmax} exceeds the exhaustive ceiling {MAX_EXHAUSTIVE_LENGTH}")
        table = mobius_sieve(c.limit)
        bits = table.squared()[1:]
        observed = self.census(SymbolicSequence(bits, 2), c.jmax)

        gaps = np.diff(np.asarray(squarefree_enumerate(c.limit, table).values, dtype=np.int64))
        gap_jmax = min(GAP_CENSUS_JMAX, c.jmax, int(gaps.size))
        gap_census = self.census(SymbolicSequence.dense(gaps), gap_jmax) if gap_jmax > 0 else None

        rows = []
        for record in observed.records:
            J = record.length
            admissible = count_admissible(J)
            codes = observed_block_codes(bits, J)
            gap_record = gap_census.record(J) if gap_census is not None and J <= gap_jmax else None
            rows.append(
                {
                    "J": J,
                    "count_observed": record.count_all,
                    "count_admissible": admissible,
                    "entropy_observed_nats": record.entropy_all,
                    "entropy_admissible_nats": _entropy(admissible, J),
                    "observed_admissible": bool(admissible_mask(codes, J).all()),
                    "gap_blocks": None if gap_record is None else gap_record.count_all,
                    "gap_entropy_nats": None if gap_record is None else gap_record.entropy_all,
                }
            )
        frame = pd.DataFrame(rows).astype({"gap_blocks": "Int64", "gap_entropy_nats": "Float64"})
        summary = {
            "squarefree_count": int(bits.sum()),
            "squarefree_density": float(bits.mean()),
        }
        return frame, summary

    async def run(self) -> ExperimentResult:
        frame, summary = await asyncio.to_thread(self._rows)
        checked = frame[frame["J"].isin(SQFREE_DECREASING_AT)]["entropy_admissible_nats"].tolist()
        decreasing = all(b < a for a, b in zip(checked, checked[1:]))
        within = all(SQUAREFREE_REFERENCE_NATS < h < log(2) for h in checked)
        ok = (
            bool(frame["observed_admissible"].all())
            and bool((frame["count_observed"] <= frame["count_admissible"]).all())
            and decreasing
        )
        summary["admissible_decreasing"] = decreasing
        summary["admissible_within_reference_band"] = within
        return self.result(frame, summary, Verdict.of(ok), reference_nats=f"{SQUAREFREE_REFERENCE_NATS:.6f}")


# ----------------------------------------------------------------------------
# partial sums of a(n) mu(n) and Delta a(n) mu(n)
# ----------------------------------------------------------------------------


class SarnakExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.SARNAK

    def _report(self) -> PartialSumReport:
        N = self.config.limit
        if N < SARNAK_MIN_LIMIT:
            raise UsageError(f"limit must be at least {SARNAK_MIN_LIMIT}, got {N}")
        pair = sarnak_build(N, mobius_sieve(N + 2))
        mu = pair.mu_values[1 : N + 1].astype(np.int64)
        a_mu = np.cumsum(pair.a_values[1 : N + 1].astype(np.int64) * mu)
        delta_mu = np.cumsum(pair.delta_values[1 : N + 1].astype(np.int64) * mu)
        abs_mu = np.cumsum(np.abs(mu))
        checkpoints = []
        for k in range(1, 11):
            limit = k * N // 10
            checkpoints.append(
                PartialSumCheckpoint(limit, int(a_mu[limit - 1]), int(delta_mu[limit - 1]), int(abs_mu[limit - 1]))
            )
        return PartialSumReport(tuple(checkpoints))

    async def run(self) -> ExperimentResult:
        report = await asyncio.to_thread(self._report)
        final = report.final
        # exact forms of |S_delta|/N <= 10/N, S_a/N >= S_abs/3N - 3/N and S_a/N >= 0.19
        delta_ok = abs(final.sum_delta_mu) <= 10
        third_ok = 3 * final.sum_a_mu >= final.sum_abs_mu - 9
        floor_ok = 100 * final.sum_a_mu >= 19 * final.limit
        summary = {
            "sum_a_mu": final.sum_a_mu,
            "sum_delta_a_mu": final.sum_delta_mu,
            "sum_abs_mu": final.sum_abs_mu,
            "delta_bound_ok": delta_ok,
            "third_bound_ok": third_ok,
            "floor_ok": floor_ok,
            "block_violations": 0,
        }
        verdict = Verdict.of(delta_ok and third_ok and floor_ok)
        return self.result(report.to_frame(), summary, verdict, reference=f"{SARNAK_REFERENCE:.6f}")


# ----------------------------------------------------------------------------
# dual entropy over sampled x
# ----------------------------------------------------------------------------


class DualExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.DUAL

    def _encoding(self) -> EncodingKind:
        kind = self.config.encoding_kind
        if kind == EncodingKind.AUTO:
            return EncodingKind.SYMBOLIC if self.config.family == "bounded-diff" else EncodingKind.QUANTIZED
        if kind == EncodingKind.SYMBOLIC and self.config.family != "bounded-diff":
            raise UsageError("the exact symbolic encoding needs bounded differences; use --encoding quantized")
        return kind

    def _family(self) -> Optional[IntegerSequence]:
        c = self.config
        if c.family == "bounded-diff":
            return cumsum(bounded_difference(c.gap_bound, c.seed, c.length))
        elif c.family == "exm1":
            return exm1_sequence(c.p, c.pprime, c.seed, c.length)
        elif c.family == "geometric":
            return None
        raise UsageError(f"unknown family {c.family!r}; choose from {', '.join(DUAL_FAMILIES)}")

    def _truncation_levels(self, stream: DigitStream) -> Optional[int]:
        """L with grid = p^L when the digit identity applies, else None"""
        c = self.config
        if c.family != "geometric" or stream.base != c.p:
            return None
        levels, power = 0, 1
        while power < c.grid:
            power *= c.p
            levels += 1
        return levels if power == c.grid and levels >= 1 else None

    def _sample(
        self, index: int, stream: DigitStream, a: Optional[IntegerSequence], encoding: EncodingKind
    ) -> List[DualEntropyRecord]:
        c = self.config
        started = perf_counter()
        if encoding == EncodingKind.SYMBOLIC:
            sequence = encode_scaled_differences(a.delta(), stream, c.precision, c.guard)
            alphabet = sequence.alphabet_size
            sample_census = self.census(sequence, c.jmax, threads=1)
        else:
            if a is None:
                torus = geometric_mod1(c.p, stream, c.length, c.precision, c.guard)
            else:
                torus = scalar_sequence(a, stream, c.precision, c.guard)
            alphabet = c.grid
            sample_census = quantized_census(torus, c.jmax, c.grid, c.tau, c.engine)

        truncation_counts = digit_counts = None
        levels = self._truncation_levels(stream)
        if levels is not None:
            truncation = base_p_truncation(stream, levels, c.length)
            truncation_counts = self.census(truncation.as_symbolic(), c.jmax, threads=1)
            digits = SymbolicSequence(stream.digits(1, c.length + levels - 1), stream.base)
            digit_counts = self.census(digits, c.jmax + levels - 1, threads=1)

        records = []
        for record in sample_census.records:
            J = record.length
            records.append(
                DualEntropyRecord(
                    sample=index,
                    x=stream.describe(),
                    alphabet=alphabet,
                    length=J,
                    count_all=record.count_all,
                    entropy=record.entropy_all,
                    truncation_count=None if truncation_counts is None else truncation_counts.count_all(J),
                    digit_count=None if digit_counts is None else digit_counts.count_all(J + levels - 1),
                )
            )
        self.log.debug(f"sample {index} ({stream.describe()}) done in {perf_counter() - started:.2f}s")
        return records

    async def run(self) -> ExperimentResult:
        c = self.config
        encoding = self._encoding()
        a = await asyncio.to_thread(self._family)
        streams = x_streams(c.x, c.samples, c.seed)
        semaphore = asyncio.Semaphore(c.threads)

        async def bounded(index: int, stream: DigitStream) -> List[DualEntropyRecord]:
            async with semaphore:
                return await asyncio.to_thread(self._sample, index, stream, a, encoding)

        per_sample = await asyncio.gather(*(bounded(i, s) for i, s in enumerate(streams)))
        report = DualEntropyReport(tuple(r for records in per_sample for r in records))
        summary = {
            "family": c.family,
            "encoding": encoding.value,
            "spread_at_jmax": report.spread(c.jmax),
        }
        if report.has_digit_identity:
            summary["digit_identity"] = report.digit_identity_holds()
        return self.result(report.to_frame(), summary)


# ----------------------------------------------------------------------------
# reconstruction of x from x_d
# ----------------------------------------------------------------------------


class ReconstructExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.RECONSTRUCT

    def _rows(self) -> Tuple[pd.DataFrame, dict, bool]:
        c = self.config
        x = torus_source(c.sequence, c.length, c.precision)
        g, f = reconstruct(x, c.d, c.grid)
        error = sup_torus_error(x, g)
        bound = Fraction(2, c.grid)

        # regular g-blocks over the positions where f is defined
        domain = len(f)
        lengths = [K * c.d * c.grid for K in (1, 2) if K * c.d * c.grid <= domain]
        if not lengths:
            raise UsageError(f"length {c.length} leaves no room for J = dN = {c.d * c.grid}")
        top = max(lengths)
        g_census = self.census(QuantizedSequence(g.levels[:domain], g.grid).as_symbolic(), top)
        f_census = self.census(f.as_symbolic(), top)

        rows = []
        for K, J in enumerate(lengths, start=1):
            regular = g_census.record(J).count_regular
            blocks = f_census.count_all(J)
            limit = c.grid ** (2 * K * c.d) * blocks
            rows.append(
                {
                    "J": J,
                    "K": K,
                    "regular_blocks_g": regular,
                    "blocks_f": blocks,
                    "bound": limit,
                    "holds": regular <= limit,
                }
            )
        frame = pd.DataFrame(rows).astype({"bound": object})
        summary = {
            "sup_error": float(error),
            "error_bound": float(bound),
            "error_ok": error <= bound,
            "grid_squared": c.grid**2,
        }
        return frame, summary, error <= bound and all(row["holds"] for row in rows)

    async def run(self) -> ExperimentResult:
        frame, summary, ok = await asyncio.to_thread(self._rows)
        return self.result(frame, summary, Verdict.of(ok))


# ----------------------------------------------------------------------------
# count inequalities between gap blocks and support blocks
# ----------------------------------------------------------------------------


class BoundsExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.BOUNDS

    def _rows(self) -> Tuple[pd.DataFrame, dict, bool]:
        c = self.config
        L = c.gap_bound
        if L < 1:
            raise UsageError("bounds needs a gap bound of at least 1")
        indicator = support_indicator(c.support, c.length, L)
        positions = np.flatnonzero(indicator)
        if positions.size < 2:
            raise UsageError(f"support {c.support!r} has fewer than two points")
        gaps = np.diff(positions)
        if int(gaps.max()) > L:
            raise UsageError(f"support {c.support!r} has a gap of {int(gaps.max())} > L = {L}")
        window = L * c.jmax
        if window > indicator.size:
            raise UsageError(f"L * J_max = {window} exceeds the indicator length {indicator.size}")

        # gap blocks start at support points whose L*J_max window fits
        fitting = int(np.count_nonzero(positions + window <= indicator.size))
        usable = min(fitting + c.jmax - 1, int(gaps.size))
        if usable < c.jmax:
            raise UsageError(f"support {c.support!r} has too few points for J_max = {c.jmax}")
        delta = IntegerSequence(tuple(gaps[:usable].tolist()))
        encoded = encode_scaled_differences(delta, parse_digit_stream(c.x), c.precision, c.guard)
        gap_census = self.census(encoded, c.jmax)
        support_census = self.census(SymbolicSequence(indicator, 2), window)

        rows = []
        for record in gap_census.records:
            J = record.length
            support_blocks = support_census.count_all(L * J)
            upper = L * J * (record.count_all + 1) ** L
            rows.append(
                {
                    "J": J,
                    "gap_blocks": record.count_all,
                    "support_blocks": support_blocks,
                    "upper_bound": upper,
                    "holds": record.count_all <= support_blocks <= upper,
                }
            )
        frame = pd.DataFrame(rows).astype({"upper_bound": object})
        summary = {"support_points": int(positions.size), "gap_blocks_from": usable}
        return frame, summary, all(row["holds"] for row in rows)

    async def run(self) -> ExperimentResult:
        frame, summary, ok = await asyncio.to_thread(self._rows)
        return self.result(frame, summary, Verdict.of(ok))


# ----------------------------------------------------------------------------
# two exm1 families and their entropy bands
# ----------------------------------------------------------------------------


class FurstenbergExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.FURSTENBERG

    def _family(self, p: int, pprime: int, seed: int) -> Tuple[BlockCensus, BlockCensus]:
        """Censuses of the quantized a_x and of the increments Delta c"""
        c = self.config
        a = exm1_sequence(p, pprime, seed, c.length)
        increments = [
            (a[n + 1] - a[n]) - (p ** (n + 1) - p**n) for n in range(len(a) - 1)
        ]
        torus = scalar_sequence(a, parse_digit_stream(c.x), c.precision, c.guard)
        return (
            quantized_census(torus, c.jmax, c.grid, c.tau, c.engine),
            self.census(SymbolicSequence.dense(increments), c.jmax, threads=1),
        )

    async def run(self) -> ExperimentResult:
        c = self.config
        (a_census, dc_a), (b_census, dc_b) = await asyncio.gather(
            asyncio.to_thread(self._family, c.p, c.pprime, c.seed),
            asyncio.to_thread(self._family, c.q, c.qprime, c.seed + 1),
        )
        log_p, log_q = log(c.p), log(c.q)
        rows = []
        for J in range(1, c.jmax + 1):
            h_dc_a, h_dc_b = dc_a.entropy_all(J), dc_b.entropy_all(J)
            h_ax, h_bx = a_census.entropy_all(J), b_census.entropy_all(J)
            # AE(a_x) / AE*(a) is at least (h - ln p) / (h + ln p)
            lower = (h_dc_a - log_p) / (h_dc_a + log_p) + (h_dc_b - log_q) / (h_dc_b + log_q)
            rows.append(
                {
                    "J": J,
                    "entropy_a_x_nats": h_ax,
                    "entropy_b_x_nats": h_bx,
                    "entropy_delta_c_a_nats": h_dc_a,
                    "entropy_delta_c_b_nats": h_dc_b,
                    "band_a_low": h_dc_a - log_p,
                    "band_a_high": h_dc_a + log_p,
                    "band_b_low": h_dc_b - log_q,
                    "band_b_high": h_dc_b + log_q,
                    "ratio_sum_observed": h_ax / (h_dc_a + log_p) + h_bx / (h_dc_b + log_q),
                    "ratio_sum_lower": lower,
                    "qualifies": h_dc_a > 3 * log_p and h_dc_b > 3 * log_q,
                }
            )
        frame = pd.DataFrame(rows)
        qualifying = frame[frame["qualifies"]]
        ok = not qualifying.empty and bool((qualifying["ratio_sum_lower"] > 1).all())
        summary = {
            "qualifying_J": ",".join(str(J) for J in qualifying["J"]),
            "band_a_low_at_1": float(frame["band_a_low"].iloc[0]),
        }
        return self.result(frame, summary, Verdict.of(ok))


# ----------------------------------------------------------------------------
# exhaustive admissible counts
# ----------------------------------------------------------------------------


class AdmissibleCountExperiment(ExperimentABC):
    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType.ADMISSIBLE_COUNT

    def _rows(self) -> pd.DataFrame:
        if self.config.jmax > MAX_EXHAUSTIVE_LENGTH:
            raise RefusalError(f"J_max = {self.config.jmax} exceeds the exhaustive ceiling {MAX_EXHAUSTIVE_LENGTH}")
        rows = []
        for J in range(1, self.config.jmax + 1):
            count = count_admissible(J)
            rows.append({"J": J, "count": count, "entropy_nats": _entropy(count, J)})
        return pd.DataFrame(rows)

    async def run(self) -> ExperimentResult:
        frame = await asyncio.to_thread(self._rows)
        return self.result(frame, {}, reference_nats=f"{SQUAREFREE_REFERENCE_NATS:.6f}")
