from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Protocol, Sequence, Tuple

import numpy as np

from src.api.errors import SequenceError


def _frozen(values: Iterable[int] | np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.int64, copy=True).reshape(-1)
    array.setflags(write=False)
    return array


class BinaryDigits(Protocol):
    """What the torus operators need from a digit stream"""

    @property
    def base(self) -> int: ...

    def prefix_int(self, count: int) -> int: ...


@dataclass(frozen=True, eq=False)
class SymbolicSequence:
    """Finite sequence over the alphabet {0..q-1}"""

    symbols: np.ndarray
    alphabet_size: int

    def __post_init__(self) -> None:
        symbols = _frozen(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if self.alphabet_size < 1:
            raise SequenceError(f"alphabet size must be positive, got {self.alphabet_size}")
        if symbols.size == 0:
            raise SequenceError("a symbolic sequence needs at least one symbol")
        if symbols.min() < 0 or symbols.max() >= self.alphabet_size:
            raise SequenceError(
                f"symbols must lie in [0, {self.alphabet_size}), got range "
                f"[{symbols.min()}, {symbols.max()}]"
            )

    @staticmethod
    def dense(values: Iterable[int] | np.ndarray) -> "SymbolicSequence":
        """Relabels arbitrary integers to 0..q-1 in order of magnitude."""
        values = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if values.size == 0:
            raise SequenceError("a symbolic sequence needs at least one symbol")
        uniques, inverse = np.unique(values, return_inverse=True)
        return SymbolicSequence(inverse.reshape(-1), int(uniques.size))

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolicSequence):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and np.array_equal(self.symbols, other.symbols)

    def tolist(self) -> list[int]:
        return self.symbols.tolist()


@dataclass(frozen=True)
class TorusSequence:
    """Fixed-point values mantissa/2^P in [0, 1)"""

    mantissas: Tuple[int, ...]
    precision: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "mantissas", tuple(int(m) for m in self.mantissas))
        if self.precision < 1:
            raise SequenceError(f"precision must be positive, got {self.precision}")
        modulus = 1 << self.precision
        for n, m in enumerate(self.mantissas):
            if not 0 <= m < modulus:
                raise SequenceError(f"mantissa {m} at position {n} outside [0, 2^{self.precision})")

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    def __len__(self) -> int:
        return len(self.mantissas)

    def __getitem__(self, n: int) -> int:
        return self.mantissas[n]

    @staticmethod
    def from_floats(values: Iterable[float], precision: int) -> "TorusSequence":
        """Rounds each value mod 1 to the nearest multiple of 2^-P (exact on the float's binary value)."""
        modulus = 1 << precision
        return TorusSequence(
            tuple(round(Fraction(v) * modulus) % modulus for v in values),
            precision,
        )

    @staticmethod
    def from_polynomial(coefficients: Sequence[int], length: int, precision: int) -> "TorusSequence":
        """x(n) = sum_k c_k n^k mod 2^P with mantissa coefficients c_k.

        `from_polynomial([0, A], ...)` is the rotation by A/2^P, and
        `from_polynomial([0, 0, B], ...)` the quadratic phase n^2 B/2^P.
        """
        modulus = 1 << precision
        return TorusSequence(
            tuple(
                sum(c * n**k for k, c in enumerate(coefficients)) % modulus
                for n in range(length)
            ),
            precision,
        )

    @staticmethod
    def constant(mantissa: int, length: int, precision: int) -> "TorusSequence":
        return TorusSequence((mantissa,) * length, precision)


@dataclass(frozen=True)
class IntegerSequence:
    """Arbitrary-precision integers a(n)"""

    values: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def delta(self) -> "IntegerSequence":
        """Forward difference a(n+1) - a(n)"""
        return IntegerSequence(tuple(b - a for a, b in zip(self.values, self.values[1:])))

    def is_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))


@dataclass(frozen=True, eq=False)
class QuantizedSequence:
    """Grid levels; value at n is level(n)/N"""

    levels: np.ndarray
    grid: int

    def __post_init__(self) -> None:
        if self.grid < 1:
            raise SequenceError(f"grid must be positive, got {self.grid}")
        levels = np.array(self.levels, dtype=object if self.grid > 2**62 else np.int64).reshape(-1)
        if levels.size and (levels.min() < 0 or levels.max() >= self.grid):
            raise SequenceError(f"levels must lie in [0, {self.grid})")
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    def __len__(self) -> int:
        return int(self.levels.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantizedSequence):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.levels, other.levels)

    def tolist(self) -> list[int]:
        return [int(v) for v in self.levels]

    def as_symbolic(self) -> SymbolicSequence:
        """Grid indices as a symbolic sequence over {0..N-1}."""
        if self.grid > 2**62:
            return SymbolicSequence.dense(self.levels.tolist())
        return SymbolicSequence(self.levels, self.grid)
