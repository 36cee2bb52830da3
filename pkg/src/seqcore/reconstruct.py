from fractions import Fraction
from typing import Tuple

from src.api.errors import InvariantViolationError, UsageError
from src.seqcore.sequences import QuantizedSequence, TorusSequence
from src.seqcore.torus import difference, quantize


def sup_torus_error(x: TorusSequence, approximation: QuantizedSequence) -> Fraction:
    """Exact sup_n of the torus distance between x(n) and level(n)/N."""
    if len(approximation) < len(x):
        raise UsageError("approximation is shorter than the sequence it approximates")
    grid = approximation.grid
    span = grid << x.precision
    worst = 0
    for m, level in zip(x.mantissas, approximation.levels.tolist()):
        gap = (int(level) * x.modulus - m * grid) % span
        worst = max(worst, min(gap, span - gap))
    return Fraction(worst, span)


def reconstruct(x: TorusSequence, d: int, grid: int) -> Tuple[QuantizedSequence, QuantizedSequence]:
    """Rebuilds x on the grid N^2 from anchors and quantized d-differences.

    f is `quantize(difference(x, d), N^2)`. Positions n = n1*dN + r with
    0 <= r < d are anchors and take floor(x(n) N^2); every other position
    adds one f value to the position d before it, so
    g(n1*dN + r + q*d) = g(n1*dN + r) + sum_{k<q} f(n1*dN + r + k*d).

    Args:
    -----
    x: `TorusSequence`
        Sequence to rebuild.
    d: `int`
        Difference step.
    grid: `int`
        N, with N >= d, N >= 2 and len(x) > d*N.

    Returns:
    --------
    `Tuple[QuantizedSequence, QuantizedSequence]`:
        (g, f), both on the grid N^2.

    Raises:
    -------
    `InvariantViolationError`:
        sup |g - x| exceeds 2/N.
    """
    if d < 1 or grid < max(d, 2):
        raise UsageError(f"reconstruction needs 1 <= d <= N and N >= 2, got d={d}, N={grid}")
    period = d * grid
    if len(x) <= period:
        raise UsageError(f"sequence of length {len(x)} is too short for d*N = {period}")

    fine_grid = grid * grid
    f = quantize(difference(x, d), fine_grid)
    steps = f.levels.tolist()
    levels = [0] * len(x)
    for n, m in enumerate(x.mantissas):
        if n % period < d:
            levels[n] = (m * fine_grid) >> x.precision
        else:
            levels[n] = (levels[n - d] + steps[n - d]) % fine_grid
    g = QuantizedSequence(levels, fine_grid)

    error = sup_torus_error(x, g)
    if error > Fraction(2, grid):
        raise InvariantViolationError(f"reconstruction error {float(error):.6g} exceeds 2/N = {2 / grid:.6g}")
    return g, f
