from abc import ABC, abstractmethod
from enum import Enum
from math import isqrt
from pathlib import Path
from threading import Lock
from typing import Optional

import numpy as np

from src.api.errors import InsufficientPrecisionError, UsageError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB


def splitmix64(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Outputs start .. start+count-1 of SplitMix64 seeded with `seed`.

    Output i mixes the state seed + (i+1) * 0x9E3779B97F4A7C15 (mod 2^64),
    so any window of the stream can be produced without replaying it.
    """
    with np.errstate(over="ignore"):
        state = np.uint64(seed & MASK64) + np.arange(start + 1, start + count + 1, dtype=np.uint64) * np.uint64(
            GOLDEN_GAMMA
        )
        z = (state ^ (state >> np.uint64(30))) * np.uint64(MIX_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_2)
        return z ^ (z >> np.uint64(31))


def fibonacci_symbols(length: int) -> np.ndarray:
    """Prefix of the fixed point of 0 -> 01, 1 -> 0 as uint8."""
    previous = np.array([0], dtype=np.uint8)
    current = np.array([0, 1], dtype=np.uint8)
    while current.size < length:
        previous, current = current, np.concatenate((current, previous))
    return current[:length].copy()


def _bits_of(value: int, count: int) -> np.ndarray:
    """The `count` low bits of value, most significant first."""
    if count == 0:
        return np.empty(0, dtype=np.uint8)
    n_bytes = (count + 7) // 8
    bits = np.unpackbits(np.frombuffer(value.to_bytes(n_bytes, "big"), dtype=np.uint8))
    return bits[8 * n_bytes - count :].copy()


class DigitStreamKind(Enum):
    PRNG = "prng"
    FIBONACCI = "fib"
    QUADRATIC = "sqrt"
    RATIONAL = "rational"
    FILE = "file"


class DigitStream(ABC):
    """Digits c(0), c(1), ... of a number in [0, 1) to a fixed base.

    Digits are produced on demand and cached; the same spec always yields
    the same digits. Reads are guarded by a lock so a stream can be shared
    by worker threads.
    """

    def __init__(self, base: int) -> None:
        if base < 2:
            raise UsageError(f"digit base must be at least 2, got {base}")
        self._base = base
        self._cache = np.empty(0, dtype=np.uint8 if base <= 256 else np.int64)
        self._lock = Lock()

    @property
    def base(self) -> int:
        return self._base

    @property
    @abstractmethod
    def kind(self) -> DigitStreamKind: ...

    @property
    def finite_length(self) -> Optional[int]:
        """Number of available digits, None if unbounded"""
        return None

    @abstractmethod
    def describe(self) -> str:
        """The spec string that reproduces this stream"""
        ...

    @abstractmethod
    def _produce(self, count: int) -> np.ndarray:
        """The first `count` digits"""
        ...

    def _ensure(self, count: int) -> np.ndarray:
        with self._lock:
            cached = self._cache.size
            if count > cached:
                target = max(count, 2 * cached)
                limit = self.finite_length
                if limit is not None:
                    if count > limit:
                        raise InsufficientPrecisionError(
                            f"{self.describe()} holds {limit} digits, {count} were requested"
                        )
                    target = min(target, limit)
                cache = self._produce(target)
                cache.setflags(write=False)
                self._cache = cache
            return self._cache

    def digits(self, start: int, count: int) -> np.ndarray:
        """Digits at positions start .. start+count-1 (read-only)."""
        return self._ensure(start + count)[start : start + count]

    def prefix_int(self, count: int) -> int:
        """The integer formed by the first `count` digits, most significant first."""
        if count <= 0:
            return 0
        digits = self.digits(0, count)
        if self._base == 2:
            packed = np.packbits(digits)
            return int.from_bytes(packed.tobytes(), "big") >> (8 * packed.size - count)
        value = 0
        for digit in digits.tolist():
            value = value * self._base + digit
        return value

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()!r})"


class PrngDigitStream(DigitStream):
    """SplitMix64 outputs reduced mod base"""

    def __init__(self, seed: int, base: int = 2) -> None:
        super().__init__(base)
        self.seed = seed & MASK64

    @property
    def kind(self) -> DigitStreamKind:
        return DigitStreamKind.PRNG

    def describe(self) -> str:
        return f"prng:{self.seed}" if self.base == 2 else f"prng:{self.seed}:{self.base}"

    def _produce(self, count: int) -> np.ndarray:
        return (splitmix64(self.seed, count) % np.uint64(self.base)).astype(self._cache.dtype)


class FibonacciDigitStream(DigitStream):
    def __init__(self) -> None:
        super().__init__(2)

    @property
    def kind(self) -> DigitStreamKind:
        return DigitStreamKind.FIBONACCI

    def describe(self) -> str:
        return "fib"

    def _produce(self, count: int) -> np.ndarray:
        return fibonacci_symbols(count)


class QuadraticDigitStream(DigitStream):
    """Binary digits of frac(sqrt(m)) from integer square roots"""

    def __init__(self, m: int) -> None:
        super().__init__(2)
        if m < 1:
            raise UsageError(f"quadratic stream needs a positive radicand, got {m}")
        if isqrt(m) ** 2 == m:
            raise UsageError(f"{m} is a perfect square; sqrt({m}) has no fractional digits")
        self.m = m

    @property
    def kind(self) -> DigitStreamKind:
        return DigitStreamKind.QUADRATIC

    def describe(self) -> str:
        return f"sqrt:{self.m}"

    def prefix_int(self, count: int) -> int:
        if count <= 0:
            return 0
        return isqrt(self.m << (2 * count)) - (isqrt(self.m) << count)

    def _produce(self, count: int) -> np.ndarray:
        return _bits_of(self.prefix_int(count), count)


class RationalDigitStream(DigitStream):
    """Binary digits of frac(numerator / denominator)"""

    def __init__(self, numerator: int, denominator: int) -> None:
        super().__init__(2)
        if denominator <= 0:
            raise UsageError(f"denominator must be positive, got {denominator}")
        self.numerator = numerator
        self.denominator = denominator

    @property
    def kind(self) -> DigitStreamKind:
        return DigitStreamKind.RATIONAL

    def describe(self) -> str:
        return f"rational:{self.numerator}/{self.denominator}"

    def prefix_int(self, count: int) -> int:
        if count <= 0:
            return 0
        return ((self.numerator % self.denominator) << count) // self.denominator

    def _produce(self, count: int) -> np.ndarray:
        return _bits_of(self.prefix_int(count), count)


class FileDigitStream(DigitStream):
    """Raw bytes of a file, one digit per byte"""

    def __init__(self, path: str | Path, base: int = 2) -> None:
        super().__init__(base)
        self.path = Path(path)
        try:
            data = np.fromfile(self.path, dtype=np.uint8)
        except OSError as e:
            raise UsageError(f"cannot read digit file {self.path}: {e}") from e
        if data.size and int(data.max()) >= base:
            raise UsageError(f"{self.path} holds byte {int(data.max())}, not a base-{base} digit")
        self._data = data

    @property
    def kind(self) -> DigitStreamKind:
        return DigitStreamKind.FILE

    @property
    def finite_length(self) -> Optional[int]:
        return int(self._data.size)

    def describe(self) -> str:
        return f"file:{self.path}" if self.base == 2 else f"file:{self.path}:{self.base}"

    def _produce(self, count: int) -> np.ndarray:
        return self._data[:count].astype(self._cache.dtype)


def parse_digit_stream(spec: str) -> DigitStream:
    """Builds a stream from `sqrt:M`, `fib`, `prng:SEED[:BASE]`, `rational:P/Q` or `file:PATH[:BASE]`."""
    kind, _, rest = spec.strip().partition(":")
    try:
        stream_kind = DigitStreamKind(kind)
    except ValueError:
        raise UsageError(f"unknown digit stream kind {kind!r} in {spec!r}") from None

    try:
        if stream_kind == DigitStreamKind.FIBONACCI:
            return FibonacciDigitStream()
        elif stream_kind == DigitStreamKind.QUADRATIC:
            return QuadraticDigitStream(int(rest))
        elif stream_kind == DigitStreamKind.RATIONAL:
            numerator, _, denominator = rest.partition("/")
            return RationalDigitStream(int(numerator), int(denominator))
        elif stream_kind == DigitStreamKind.PRNG:
            seed, _, base = rest.partition(":")
            return PrngDigitStream(int(seed, 0), int(base) if base else 2)
        else:
            path, _, base = rest.rpartition(":") if rest.rsplit(":", 1)[-1].isdigit() else (rest, "", "")
            return FileDigitStream(path, int(base) if base else 2)
    except ValueError as e:
        raise UsageError(f"malformed digit stream spec {spec!r}: {e}") from e
