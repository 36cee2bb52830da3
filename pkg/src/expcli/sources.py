"""Turns the sequence arguments of the experiments into sequences."""

from fractions import Fraction
from typing import List

import numpy as np

from src.api.errors import UsageError
from src.generators import (
    DigitStream,
    fibonacci_word,
    load_symbols,
    parse_digit_stream,
    prng_stream,
    quadratic_digits,
    random_torus,
    symbol_stream,
)
from src.numtheory import mobius_sieve
from src.seqcore import SymbolicSequence, TorusSequence

from .config import ExperimentConfig

SYMBOLIC_GENERATORS = ("fibonacci", "prng", "constant", "squarefree", "file")


def symbolic_source(config: ExperimentConfig) -> SymbolicSequence:
    """The sequence scanned by the entropy experiment.

    `fibonacci` is the Fibonacci word, `prng` a SplitMix64 stream over
    `alphabet` symbols, `constant` all zeros, `squarefree` mu^2(1..length),
    and `file` reads `input`. An `input` path always wins.
    """
    generator = config.generator
    if config.input:
        return load_symbols(config.input)
    if generator == "fibonacci":
        return fibonacci_word(config.length)
    elif generator == "prng":
        if config.alphabet < 2:
            raise UsageError(f"prng needs an alphabet of at least 2, got {config.alphabet}")
        return symbol_stream(prng_stream(config.seed, config.alphabet), config.length)
    elif generator == "constant":
        return SymbolicSequence(np.zeros(config.length, dtype=np.int64), 1)
    elif generator == "squarefree":
        return SymbolicSequence(mobius_sieve(config.length).squared()[1:], 2)
    elif generator == "file":
        raise UsageError("generator 'file' needs --input")
    raise UsageError(f"unknown generator {generator!r}; choose from {', '.join(SYMBOLIC_GENERATORS)}")


def torus_source(spec: str, length: int, precision: int) -> TorusSequence:
    """Torus sequences by name.

    `rotation:M` is n frac(sqrt M), `quadratic:M` is n^2 frac(sqrt M),
    `random:SEED` draws SplitMix64 mantissas and `constant:P/Q` repeats P/Q.
    """
    kind, _, argument = spec.strip().partition(":")
    try:
        if kind in ("rotation", "quadratic"):
            alpha = quadratic_digits(int(argument or 2), precision).prefix_int(precision)
            coefficients = [0, alpha] if kind == "rotation" else [0, 0, alpha]
            return TorusSequence.from_polynomial(coefficients, length, precision)
        elif kind == "random":
            return random_torus(int(argument or "0", 0), length, precision)
        elif kind == "constant":
            value = Fraction(argument or "0") % 1
            mantissa = round(value * (1 << precision)) % (1 << precision)
            return TorusSequence.constant(mantissa, length, precision)
    except ValueError as e:
        raise UsageError(f"malformed torus sequence {spec!r}: {e}") from e
    raise UsageError(f"unknown torus sequence {spec!r}; use rotation:M, quadratic:M, random:SEED or constant:P/Q")


def x_streams(spec: str, samples: int, seed: int) -> List[DigitStream]:
    """Digit streams of the sampled x.

    `spec` is a comma separated list; samples past its end use `prng:SEED+i`.
    """
    given = [part for part in spec.split(",") if part.strip()]
    streams = [parse_digit_stream(part) for part in given[:samples]]
    streams.extend(parse_digit_stream(f"prng:{seed + i}") for i in range(len(streams), samples))
    return streams


def support_indicator(spec: str, length: int, gap_bound: int) -> np.ndarray:
    """0/1 indicator of a set A of non-negative integers below `length`.

    `fibonacci` takes the positions of 0 in the Fibonacci word, `periodic:K`
    every K-th integer, `prng:SEED` gaps drawn uniformly from 1..L, and
    `file:PATH` reads a 0/1 sequence.
    """
    kind, _, argument = spec.strip().partition(":")
    try:
        if kind == "fibonacci":
            return (fibonacci_word(length).symbols == 0).astype(np.int64)
        elif kind == "periodic":
            step = int(argument or 2)
            if step < 1:
                raise ValueError("the period must be positive")
            indicator = np.zeros(length, dtype=np.int64)
            indicator[::step] = 1
            return indicator
        elif kind == "prng":
            if gap_bound < 1:
                raise ValueError("random support needs a gap bound of at least 1")
            if gap_bound == 1:
                gaps = np.ones(length, dtype=np.int64)
            else:
                gaps = prng_stream(int(argument or "0", 0), gap_bound).digits(0, length).astype(np.int64) + 1
            positions = np.concatenate(([0], np.cumsum(gaps)))
            indicator = np.zeros(length, dtype=np.int64)
            indicator[positions[positions < length]] = 1
            return indicator
        elif kind == "file":
            symbols = load_symbols(argument).symbols
            if symbols.max() > 1:
                raise ValueError(f"{argument} is not a 0/1 sequence")
            return symbols.astype(np.int64)
    except ValueError as e:
        raise UsageError(f"malformed support {spec!r}: {e}") from e
    raise UsageError(f"unknown support {spec!r}; use fibonacci, periodic:K, prng:SEED or file:PATH")
