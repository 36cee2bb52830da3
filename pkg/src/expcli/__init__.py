from .config import (
    COMMAND_DEFAULTS,
    VERSION,
    EncodingKind,
    ExperimentConfig,
    ExperimentType,
    load_config,
    read_config_file,
)
from .reports import (
    DualEntropyRecord,
    DualEntropyReport,
    ExperimentResult,
    PartialSumCheckpoint,
    PartialSumReport,
)
from .experiments import (
    AdmissibleCountExperiment,
    BoundsExperiment,
    DualExperiment,
    EntropyExperiment,
    ExperimentABC,
    FurstenbergExperiment,
    ReconstructExperiment,
    SarnakExperiment,
    SqfreeExperiment,
    VdcExperiment,
)
from .runner import ExperimentRunner, ExperimentRunnerABC
from .converter import render, to_csv, to_json
from .service import CliService, build_parser
