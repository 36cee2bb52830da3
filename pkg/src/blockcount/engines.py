from abc import ABC, abstractmethod
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Iterable, List, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.api import LoggingProvider
from src.api.errors import UsageError
from src.api.undefined import UNDEFINED
from src.seqcore import QuantizedSequence, SymbolicSequence, TorusSequence, quantize
from src.utils import logging_provider as default_logging_provider

from .automaton import SuffixAutomaton
from .census import BlockCensus, BlockRecord

# window codes stay in int64 while q^J stays below this
_CODE_LIMIT = 1 << 62


class CensusEngineKind(Enum):
    NAIVE = "naive"
    PACKED = "packed"
    AUTOMATON = "automaton"


def _check_request(sequence: SymbolicSequence, j_max: int, tau: int) -> None:
    if j_max < 1:
        raise UsageError(f"J_max must be at least 1, got {j_max}")
    if j_max > len(sequence):
        raise UsageError(f"J_max = {j_max} exceeds the sequence length {len(sequence)}")
    if tau < 1:
        raise UsageError(f"tau must be at least 1, got {tau}")


class CensusEngineABC(ABC):
    """Counts distinct blocks of a symbolic sequence for J = 1..J_max."""

    def __init__(self, logging_provider: LoggingProvider = default_logging_provider) -> None:
        self.log = logging_provider(__name__, self)

    @property
    @abstractmethod
    def kind(self) -> CensusEngineKind: ...

    @abstractmethod
    def census(self, sequence: SymbolicSequence, j_max: int, tau: int = 2) -> BlockCensus:
        """Builds the census.

        Args:
        -----
        sequence: `SymbolicSequence`
            The sequence to scan.
        j_max: `int`
            Largest block length, at most len(sequence).
        tau: `int`
            Occurrence threshold of effective blocks.

        Raises:
        -------
        `UsageError`:
            J_max outside 1..len(sequence) or tau < 1.
        """
        ...


class NaiveCensusEngine(CensusEngineABC):
    """Counter over block tuples. Slow, used as the reference for the others."""

    @property
    def kind(self) -> CensusEngineKind:
        return CensusEngineKind.NAIVE

    def census(self, sequence: SymbolicSequence, j_max: int, tau: int = 2) -> BlockCensus:
        _check_request(sequence, j_max, tau)
        symbols = sequence.tolist()
        n = len(symbols)
        records = []
        for J in range(1, j_max + 1):
            occurrences = Counter(tuple(symbols[i : i + J]) for i in range(n - J + 1))
            regular = Counter(tuple(symbols[m * J : (m + 1) * J]) for m in range(n // J))
            records.append(
                BlockRecord(
                    length=J,
                    count_all=len(occurrences),
                    count_regular=len(regular),
                    count_effective=sum(1 for c in occurrences.values() if c >= tau),
                    count_effective_regular=sum(1 for block in regular if occurrences[block] >= tau),
                )
            )
        return BlockCensus(tuple(records), n, sequence.alphabet_size, tau, self.kind.value)


def _window_keys(symbols: np.ndarray, alphabet_size: int, J: int, previous: Optional[np.ndarray]) -> np.ndarray:
    """One sortable key per window of length J.

    Keys are base-q integers while q^J fits, rolled forward from the J-1 keys;
    past that, each window becomes a fixed-width byte string.
    """
    if alphabet_size**J < _CODE_LIMIT:
        if previous is None:
            return sliding_window_view(symbols, J) @ (alphabet_size ** np.arange(J - 1, -1, -1, dtype=np.int64))
        return previous[:-1] * alphabet_size + symbols[J - 1 :]
    narrow = symbols.astype(np.min_scalar_type(alphabet_size - 1))
    rows = np.ascontiguousarray(sliding_window_view(narrow, J))
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * J))).reshape(-1)


def _record_from_keys(J: int, keys: np.ndarray, tau: int) -> BlockRecord:
    uniques, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    regular = np.unique(inverse.reshape(-1)[::J])
    return BlockRecord(
        length=J,
        count_all=int(uniques.size),
        count_regular=int(regular.size),
        count_effective=int(np.count_nonzero(counts >= tau)),
        count_effective_regular=int(np.count_nonzero(counts[regular] >= tau)),
    )


class PackedCensusEngine(CensusEngineABC):
    """Sorts packed window keys with numpy, one J at a time.

    With `threads > 1` the per-J sorts run on a thread pool; results are
    collected in J order so the census does not depend on scheduling.
    """

    def __init__(self, threads: int = 1, logging_provider: LoggingProvider = default_logging_provider) -> None:
        super().__init__(logging_provider)
        if threads < 1:
            raise UsageError(f"threads must be at least 1, got {threads}")
        self.threads = threads

    @property
    def kind(self) -> CensusEngineKind:
        return CensusEngineKind.PACKED

    def _batches(self, sequence: SymbolicSequence, j_max: int) -> Iterable[List[Tuple[int, np.ndarray]]]:
        keys = None
        batch = []
        for J in range(1, j_max + 1):
            keys = _window_keys(sequence.symbols, sequence.alphabet_size, J, keys)
            batch.append((J, keys))
            if len(batch) == self.threads:
                yield batch
                batch = []
        if batch:
            yield batch

    def census(self, sequence: SymbolicSequence, j_max: int, tau: int = 2) -> BlockCensus:
        _check_request(sequence, j_max, tau)
        records: List[BlockRecord] = []
        if self.threads == 1:
            for batch in self._batches(sequence, j_max):
                records.extend(_record_from_keys(J, keys, tau) for J, keys in batch)
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                for batch in self._batches(sequence, j_max):
                    records.extend(pool.map(lambda item: _record_from_keys(item[0], item[1], tau), batch))
        self.log.debug(f"packed census of {len(sequence)} symbols up to J={j_max}")
        return BlockCensus(tuple(records), len(sequence), sequence.alphabet_size, tau, self.kind.value)


class AutomatonCensusEngine(CensusEngineABC):
    """Distinct factor counts from one suffix automaton.

    Only the all-block counts are available; regular and effective counts
    stay UNDEFINED.
    """

    @property
    def kind(self) -> CensusEngineKind:
        return CensusEngineKind.AUTOMATON

    def census(self, sequence: SymbolicSequence, j_max: int, tau: int = 2) -> BlockCensus:
        _check_request(sequence, j_max, tau)
        # the transition table is sized by the symbols actually present
        dense = SymbolicSequence.dense(sequence.symbols)
        automaton = SuffixAutomaton(dense.tolist(), dense.alphabet_size)
        counts = automaton.distinct_factor_counts(j_max)
        self.log.debug(f"suffix automaton with {automaton.size} states for {len(sequence)} symbols")
        records = tuple(BlockRecord(length=J, count_all=int(counts[J])) for J in range(1, j_max + 1))
        return BlockCensus(records, len(sequence), sequence.alphabet_size, UNDEFINED, self.kind.value)


def make_engine(
    kind: CensusEngineKind | str,
    threads: int = 1,
    logging_provider: LoggingProvider = default_logging_provider,
) -> CensusEngineABC:
    try:
        kind = CensusEngineKind(kind)
    except ValueError:
        raise UsageError(f"unknown census engine {kind!r}; choose from {[k.value for k in CensusEngineKind]}")
    if kind == CensusEngineKind.NAIVE:
        return NaiveCensusEngine(logging_provider)
    elif kind == CensusEngineKind.AUTOMATON:
        return AutomatonCensusEngine(logging_provider)
    return PackedCensusEngine(threads, logging_provider)


def census_naive(sequence: SymbolicSequence, j_max: int, tau: int = 2) -> BlockCensus:
    return NaiveCensusEngine().census(sequence, j_max, tau)


def census_packed(sequence: SymbolicSequence, j_max: int, tau: int = 2, threads: int = 1) -> BlockCensus:
    return PackedCensusEngine(threads).census(sequence, j_max, tau)


def census_automaton(sequence: SymbolicSequence, j_max: int) -> BlockCensus:
    return AutomatonCensusEngine().census(sequence, j_max)


def census(
    sequence: SymbolicSequence,
    j_max: int,
    tau: int = 2,
    engine: CensusEngineKind | str = CensusEngineKind.PACKED,
    threads: int = 1,
) -> BlockCensus:
    """Block census with the chosen engine; packed by default."""
    return make_engine(engine, threads).census(sequence, j_max, tau)


def quantized_census(
    x: TorusSequence | QuantizedSequence,
    j_max: int,
    grid: Optional[int] = None,
    tau: int = 2,
    engine: CensusEngineKind | str = CensusEngineKind.PACKED,
    threads: int = 1,
) -> BlockCensus:
    """Census of the grid indices of x.

    A torus sequence is quantized to `grid` first; a quantized sequence is
    used as it is and must not be given a different grid.
    """
    if isinstance(x, QuantizedSequence):
        if grid is not None and grid != x.grid:
            raise UsageError(f"sequence is already quantized to N = {x.grid}, asked for N = {grid}")
        quantized = x
    else:
        if grid is None:
            raise UsageError("a grid size is needed to quantize a torus sequence")
        quantized = quantize(x, grid)
    return census(quantized.as_symbolic(), j_max, tau, engine, threads)
