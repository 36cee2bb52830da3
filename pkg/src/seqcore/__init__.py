from .sequences import (
    BinaryDigits,
    IntegerSequence,
    QuantizedSequence,
    SymbolicSequence,
    TorusSequence,
)
from .torus import (
    DEFAULT_GUARD_BITS,
    difference,
    encode_scaled_differences,
    geometric_mod1,
    iterated_difference,
    mul_mod1,
    quantize,
    scalar_sequence,
    symbolize,
    torus_distance,
)
from .reconstruct import reconstruct, sup_torus_error
