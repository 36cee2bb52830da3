from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import dotenv_values

from src.api.errors import UsageError
from src.utils import asdict, drop_except_keys, overlay

VERSION = "0.1.0"


class ExperimentType(Enum):
    ENTROPY = "entropy"
    VDC = "vdc"
    SQFREE = "sqfree"
    SARNAK = "sarnak"
    DUAL = "dual"
    RECONSTRUCT = "reconstruct"
    BOUNDS = "bounds"
    FURSTENBERG = "furstenberg"
    ADMISSIBLE_COUNT = "admissible-count"


class EncodingKind(Enum):
    AUTO = "auto"
    SYMBOLIC = "symbolic"
    QUANTIZED = "quantized"


@dataclass(frozen=True)
class ExperimentConfig:
    """Every parameter of an experiment run, echoed into the artifact metadata"""

    experiment: str = ExperimentType.ENTROPY.value
    seed: int = 1
    length: int = 100_000
    jmax: int = 20
    grid: int = 16
    precision: int = 128
    guard: int = 32
    limit: int = 10_000_000
    tau: int = 2
    threads: int = 1
    engine: str = "packed"
    # entropy
    generator: str = "fibonacci"
    alphabet: int = 2
    input: Optional[str] = None
    # vdc, dual, bounds
    gap_bound: int = 2
    x: str = "sqrt:2"
    # dual
    family: str = "bounded-diff"
    samples: int = 5
    encoding: str = EncodingKind.AUTO.value
    # dual, furstenberg
    p: int = 2
    pprime: int = 11
    q: int = 3
    qprime: int = 37
    # reconstruct
    sequence: str = "rotation:2"
    d: int = 1
    # bounds
    support: str = "fibonacci"
    # output only
    out: Optional[str] = None
    json: bool = False
    no_timestamp: bool = False

    @property
    def experiment_type(self) -> ExperimentType:
        return ExperimentType(self.experiment)

    @property
    def encoding_kind(self) -> EncodingKind:
        return EncodingKind(self.encoding)

    def metadata(self) -> Dict[str, Any]:
        """Parameters that describe the computation; output switches are left out."""
        params = asdict(self)
        return drop_except_keys(params, [k for k in params if k not in OUTPUT_KEYS])


OUTPUT_KEYS = frozenset({"out", "json", "no_timestamp"})

# defaults that differ from the dataclass defaults for one command
COMMAND_DEFAULTS: Dict[ExperimentType, Dict[str, Any]] = {
    ExperimentType.FURSTENBERG: {"length": 2000, "jmax": 6},
}

_POSITIVE = ("length", "jmax", "grid", "precision", "tau", "threads", "limit", "samples", "d", "alphabet")


def _coerce(name: str, kind: Any, raw: Any) -> Any:
    if raw is None or not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if kind is int:
            return int(text.replace("_", ""), 0)
        if kind is bool:
            lowered = text.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {text!r}")
    except ValueError as e:
        raise UsageError(f"invalid value for {name}: {e}") from e
    return text


def read_config_file(path: str | Path) -> Dict[str, Any]:
    """Reads `key = value` lines; dashes in keys count as underscores."""
    if not Path(path).is_file():
        raise UsageError(f"config file {path} does not exist")
    values = {key.strip().lower().replace("-", "_"): value for key, value in dotenv_values(path).items()}
    bare = sorted(key for key, value in values.items() if value is None)
    if bare:
        raise UsageError(f"config file {path} has keys without a value: {', '.join(bare)}")
    return values


def validate(config: ExperimentConfig) -> ExperimentConfig:
    """Checks the ranges of the numeric parameters.

    Raises:
    -------
    `UsageError`:
        A parameter lies outside its range.
    """
    for name in _POSITIVE:
        value = getattr(config, name)
        if value < 1:
            raise UsageError(f"{name} must be positive, got {value}")
    if config.guard < 0:
        raise UsageError(f"guard must be non-negative, got {config.guard}")
    if config.gap_bound < 0:
        raise UsageError(f"gap_bound must be non-negative, got {config.gap_bound}")
    try:
        config.experiment_type
        config.encoding_kind
    except ValueError as e:
        raise UsageError(str(e)) from e
    return config


def load_config(
    experiment: ExperimentType,
    flags: Dict[str, Any],
    config_file: Optional[str | Path] = None,
) -> ExperimentConfig:
    """Layers dataclass defaults, command defaults, the config file and flags.

    Args:
    -----
    experiment: `ExperimentType`
        The subcommand.
    flags: `Dict[str, Any]`
        Parsed flags; flags the user did not pass hold UNDEFINED.
    config_file: `Optional[str | Path]`
        Optional `key = value` file.

    Returns:
    --------
    `ExperimentConfig`:
        The validated configuration.
    """
    known = {f.name: f for f in fields(ExperimentConfig)}
    file_values = read_config_file(config_file) if config_file else {}
    unknown = sorted((set(file_values) | set(flags)) - set(known))
    if unknown:
        raise UsageError(f"unknown configuration keys: {', '.join(unknown)}")

    merged = overlay(
        COMMAND_DEFAULTS.get(experiment, {}),
        file_values,
        flags,
        {"experiment": experiment.value},
    )
    coerced = {}
    for name, value in merged.items():
        kind = known[name].type
        kind = int if kind is int else bool if kind is bool else str
        coerced[name] = _coerce(name, kind, value)
    return validate(replace(ExperimentConfig(), **coerced))
