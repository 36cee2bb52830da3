from .digits import (
    DigitStream,
    DigitStreamKind,
    FibonacciDigitStream,
    FileDigitStream,
    PrngDigitStream,
    QuadraticDigitStream,
    RationalDigitStream,
    fibonacci_symbols,
    parse_digit_stream,
    splitmix64,
)
from .families import (
    DEFAULT_POWER_BUDGET,
    base_p_truncation,
    bounded_difference,
    cumsum,
    exm1_sequence,
    fibonacci_word,
    load_symbols,
    prng_stream,
    quadratic_digits,
    random_torus,
    symbol_stream,
)
from .sarnak import BALANCED_PATTERNS, SarnakBlock, SarnakPair, sarnak_block, sarnak_build
