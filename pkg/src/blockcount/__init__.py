from .automaton import SuffixAutomaton
from .census import BlockCensus, BlockRecord, entropy_curve
from .engines import (
    AutomatonCensusEngine,
    CensusEngineABC,
    CensusEngineKind,
    NaiveCensusEngine,
    PackedCensusEngine,
    census,
    census_automaton,
    census_naive,
    census_packed,
    make_engine,
    quantized_census,
)
