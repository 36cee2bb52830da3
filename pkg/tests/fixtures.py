import io
from typing import Iterator

import numpy as np
import pytest

from src.expcli import CliService, ExperimentRunner
from src.generators import fibonacci_word, parse_digit_stream, prng_stream, symbol_stream
from src.numtheory import MobiusTable, mobius_sieve
from src.seqcore import SymbolicSequence
from src.utils import logging_provider


def random_symbols(seed: int, alphabet: int, length: int) -> SymbolicSequence:
    """fixed-seed uniform symbols; the alphabet size is kept even if a symbol is missing"""
    return symbol_stream(prng_stream(seed, alphabet), length)


@pytest.fixture(scope="session")
def fibonacci_prefix() -> SymbolicSequence:
    return fibonacci_word(100_000)


@pytest.fixture(scope="session")
def mobius_table() -> MobiusTable:
    return mobius_sieve(1_000_000)


@pytest.fixture(scope="session")
def random_sequences() -> list[SymbolicSequence]:
    """20 fixed-seed sequences over alphabets 2..16"""
    rng = np.random.default_rng(20240117)
    sequences = []
    for seed in range(20):
        alphabet = int(rng.integers(2, 17))
        length = int(rng.integers(50, 3000))
        sequences.append(random_symbols(seed, alphabet, length))
    return sequences


@pytest.fixture(scope="function")
def sqrt2():
    return parse_digit_stream("sqrt:2")


@pytest.fixture(scope="function")
def stdout() -> Iterator[io.StringIO]:
    buffer = io.StringIO()
    yield buffer
    buffer.close()


@pytest.fixture(scope="function")
def cli(stdout: io.StringIO) -> CliService:
    return CliService(
        runner=ExperimentRunner(logging_provider),
        logging_provider=logging_provider,
        stdout=stdout,
    )
