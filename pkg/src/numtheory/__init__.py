from .mobius import (
    MobiusTable,
    mobius_of,
    mobius_sieve,
    prime_sieve,
    primes_upto,
    squarefree_enumerate,
)
from .admissible import (
    MAX_EXHAUSTIVE_LENGTH,
    admissible_mask,
    block_code,
    count_admissible,
    covering_primes,
    is_admissible,
)
from .gap_block import GapBlock, gap_block_construct
