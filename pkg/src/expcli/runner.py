from abc import ABC, abstractmethod
from time import perf_counter

from src.api import LoggingProvider
from src.utils import logging_provider as default_logging_provider

from .config import ExperimentConfig, ExperimentType
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
from .reports import ExperimentResult


class ExperimentRunnerABC(ABC):
    """Runs experiments by name"""

    @abstractmethod
    async def run(self, config: ExperimentConfig) -> ExperimentResult:
        """runs the experiment named by `config.experiment`

        Args:
        -----
        config: `ExperimentConfig`
            the resolved configuration

        Returns:
        --------
        `ExperimentResult`:
            rows, summary and verdict
        """
        ...


class ExperimentRunner(ExperimentRunnerABC):
    def __init__(self, logging_provider: LoggingProvider = default_logging_provider) -> None:
        self.logging_provider = logging_provider
        self.log = logging_provider(__name__, self)

    def experiment_for(self, config: ExperimentConfig) -> ExperimentABC:
        experiment_type = config.experiment_type
        kwargs = {"config": config, "logging_provider": self.logging_provider}
        if experiment_type == ExperimentType.ENTROPY:
            return EntropyExperiment(**kwargs)
        elif experiment_type == ExperimentType.VDC:
            return VdcExperiment(**kwargs)
        elif experiment_type == ExperimentType.SQFREE:
            return SqfreeExperiment(**kwargs)
        elif experiment_type == ExperimentType.SARNAK:
            return SarnakExperiment(**kwargs)
        elif experiment_type == ExperimentType.DUAL:
            return DualExperiment(**kwargs)
        elif experiment_type == ExperimentType.RECONSTRUCT:
            return ReconstructExperiment(**kwargs)
        elif experiment_type == ExperimentType.BOUNDS:
            return BoundsExperiment(**kwargs)
        elif experiment_type == ExperimentType.FURSTENBERG:
            return FurstenbergExperiment(**kwargs)
        elif experiment_type == ExperimentType.ADMISSIBLE_COUNT:
            return AdmissibleCountExperiment(**kwargs)
        raise NotImplementedError(f"Experiment {experiment_type} is not implemented")

    async def run(self, config: ExperimentConfig) -> ExperimentResult:
        experiment = self.experiment_for(config)
        self.log.info(f"Running {config.experiment}...")
        started = perf_counter()
        result = await experiment.run()
        verdict = f", verdict {result.verdict.value}" if result.verdict else ""
        self.log.info(f"{config.experiment} finished in {perf_counter() - started:.2f}s{verdict}")
        return result
