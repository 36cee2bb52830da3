import argparse
import sys
import traceback
from pathlib import Path
from typing import List, Optional, TextIO

from src.api import ExitCode, LoggingProvider
from src.api.errors import (
    EmptyOutputError,
    InsufficientPrecisionError,
    InvariantViolationError,
    RefusalError,
    ResourceError,
    SearchBudgetError,
    SequenceError,
    UsageError,
)
from src.api.undefined import UNDEFINED, or_default
from src.blockcount import CensusEngineKind
from src.utils import drop_undefined, logging_provider as default_logging_provider

from .config import EncodingKind, ExperimentType, load_config
from .converter import render
from .runner import ExperimentRunner, ExperimentRunnerABC

# errors caused by the request rather than by the code
USAGE_ERRORS = (
    UsageError,
    RefusalError,
    InsufficientPrecisionError,
    ResourceError,
    SearchBudgetError,
    SequenceError,
    EmptyOutputError,
)


def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False, argument_default=UNDEFINED)
    shared.add_argument("--seed", type=int, help="SplitMix64 seed")
    shared.add_argument("--length", type=int, help="sequence length")
    shared.add_argument("--jmax", type=int, help="largest block length J")
    shared.add_argument("--grid", type=int, help="quantization grid N")
    shared.add_argument("--precision", type=int, help="fixed-point bits P")
    shared.add_argument("--guard", type=int, help="guard bits of scalar products")
    shared.add_argument("--limit", type=int, help="sieve limit")
    shared.add_argument("--tau", type=int, help="occurrence threshold of effective blocks")
    shared.add_argument("--threads", type=int, help="worker threads")
    shared.add_argument("--engine", choices=[k.value for k in CensusEngineKind], help="census engine")
    shared.add_argument("--out", help="write the artifact to this path instead of stdout")
    shared.add_argument("--json", action="store_true", help="JSON instead of CSV")
    shared.add_argument("--no-timestamp", action="store_true", help="leave the timestamp out of the metadata")
    shared.add_argument("--config", help="key = value file with parameters")
    return shared


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(prog="anqie", description="Block-entropy experiments on symbolic and torus sequences")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(experiment: ExperimentType, help: str) -> argparse.ArgumentParser:
        return commands.add_parser(experiment.value, parents=[shared], help=help, argument_default=UNDEFINED)

    entropy = command(ExperimentType.ENTROPY, "block census and entropy curve of one sequence")
    entropy.add_argument("--generator", help="fibonacci, prng, constant, squarefree or file")
    entropy.add_argument("--alphabet", type=int, help="alphabet of the prng generator")
    entropy.add_argument("--input", help="file with one symbol per line")

    vdc = command(ExperimentType.VDC, "bounded differences d against the encoding of Delta a_x")
    vdc.add_argument("--gap-bound", type=int, help="L, d takes values in -L..L")
    vdc.add_argument("--x", help="digit stream of x")

    command(ExperimentType.SQFREE, "square-free indicator against admissible blocks")
    command(ExperimentType.SARNAK, "partial sums of a mu and Delta a mu")

    dual = command(ExperimentType.DUAL, "dual entropy estimates over sampled x")
    dual.add_argument("--family", help="bounded-diff, geometric or exm1")
    dual.add_argument("--samples", type=int, help="number of sampled x")
    dual.add_argument("--x", help="comma separated digit streams of the sampled x")
    dual.add_argument("--gap-bound", type=int, help="L of the bounded-diff family")
    dual.add_argument("--p", type=int, help="geometric base")
    dual.add_argument("--pprime", type=int, help="increment alphabet of exm1")
    dual.add_argument("--encoding", choices=[k.value for k in EncodingKind], help="exact or quantized encoding")

    reconstruct = command(ExperimentType.RECONSTRUCT, "rebuild x from x_d and check the bounds")
    reconstruct.add_argument("--sequence", help="rotation:M, quadratic:M, random:SEED or constant:P/Q")
    reconstruct.add_argument("--d", type=int, help="difference step")

    bounds = command(ExperimentType.BOUNDS, "count inequalities between gap and support blocks")
    bounds.add_argument("--support", help="fibonacci, periodic:K, prng:SEED or file:PATH")
    bounds.add_argument("--gap-bound", type=int, help="largest gap L")
    bounds.add_argument("--x", help="digit stream of x")

    furstenberg = command(ExperimentType.FURSTENBERG, "entropy bands of two exm1 families")
    for name in ("p", "pprime", "q", "qprime"):
        furstenberg.add_argument(f"--{name}", type=int)
    furstenberg.add_argument("--x", help="digit stream of x")

    command(ExperimentType.ADMISSIBLE_COUNT, "exhaustive count of admissible 0/1 blocks")
    return parser


class CliService:
    """Parses a command line, runs the experiment and writes the artifact.

    Errors become exit codes: usage problems 2, broken invariants 1.
    """

    def __init__(
        self,
        runner: Optional[ExperimentRunnerABC] = None,
        logging_provider: LoggingProvider = default_logging_provider,
        stdout: Optional[TextIO] = None,
    ) -> None:
        self.runner = runner or ExperimentRunner(logging_provider)
        self.log = logging_provider(__name__, self)
        self.stdout = stdout

    async def run(self, argv: List[str]) -> int:
        parser = build_parser()
        try:
            args = vars(parser.parse_args(argv))
        except SystemExit as e:
            # argparse exits 0 for --help and 2 for malformed command lines
            return int(e.code or 0)

        experiment = ExperimentType(args.pop("command"))
        config_file = args.pop("config", UNDEFINED)
        try:
            config = load_config(
                experiment,
                drop_undefined(args),
                or_default(config_file, None),
            )
            result = await self.runner.run(config)
            self._write(config.out, render(config, result))
            return int(result.exit_code)
        except USAGE_ERRORS as e:
            self.log.error(f"{experiment.value}: {e}")
            self.log.debug(traceback.format_exc())
            return int(ExitCode.USAGE)
        except InvariantViolationError:
            self.log.error(f"Invariant violated in {experiment.value}: {traceback.format_exc()}")
            return int(ExitCode.FAIL)
        except Exception:
            self.log.error(f"Error running {experiment.value}: {traceback.format_exc()}")
            return int(ExitCode.FAIL)

    def _write(self, out: Optional[str], text: str) -> None:
        if out:
            Path(out).write_text(text, encoding="utf-8")
            self.log.info(f"Wrote {out}")
            return
        stream = self.stdout or sys.stdout
        stream.write(text)
        stream.flush()
