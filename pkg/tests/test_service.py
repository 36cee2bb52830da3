import io
import json

import pandas as pd
import pytest

from src.api import Verdict
from src.api.errors import InvariantViolationError
from src.expcli import CliService, ExperimentConfig, ExperimentResult, ExperimentType
from src.expcli.runner import ExperimentRunnerABC
from src.utils import logging_provider
from .fixtures import cli, stdout


class FixedRunner(ExperimentRunnerABC):
    """Returns a canned verdict or raises a canned error"""

    def __init__(self, verdict=None, error=None) -> None:
        self.verdict = verdict
        self.error = error
        self.configs = []

    async def run(self, config: ExperimentConfig) -> ExperimentResult:
        self.configs.append(config)
        if self.error is not None:
            raise self.error
        return ExperimentResult(ExperimentType(config.experiment), pd.DataFrame({"J": [1]}), {}, self.verdict)


def service(runner: ExperimentRunnerABC, out: io.StringIO) -> CliService:
    return CliService(runner=runner, logging_provider=logging_provider, stdout=out)


# -------------------------
# artifacts
# -------------------------

async def test_csv_starts_with_metadata(cli, stdout):
    code = await cli.run(["admissible-count", "--jmax", "4", "--no-timestamp"])
    lines = stdout.getvalue().splitlines()

    assert code == 0
    assert lines[0].startswith("# experiment=admissible-count ")
    assert "jmax=4" in lines[0]
    assert "units=nats" in lines[0]
    assert "timestamp=" not in lines[0]
    assert lines[1] == "J,count,entropy_nats"
    assert lines[5].startswith("4,15,")


async def test_json_document(cli, stdout):
    code = await cli.run(["admissible-count", "--jmax", "4", "--json", "--no-timestamp"])
    document = json.loads(stdout.getvalue())

    assert code == 0
    assert set(document) == {"metadata", "columns", "rows", "summary", "verdict"}
    assert document["columns"] == ["J", "count", "entropy_nats"]
    assert document["rows"][3][:2] == [4, 15]
    assert document["verdict"] is None
    assert document["metadata"]["version"] == "0.1.0"


async def test_entropy_rows_in_json(cli, stdout):
    code = await cli.run(["entropy", "--length", "200", "--jmax", "4", "--json", "--no-timestamp"])
    document = json.loads(stdout.getvalue())

    assert code == 0
    assert document["summary"]["engine"] == "packed"
    assert [row[1] for row in document["rows"]] == [2, 3, 4, 5]


async def test_output_is_reproducible():
    argv = ["dual", "--length", "500", "--jmax", "4", "--samples", "2", "--no-timestamp"]
    first, second = io.StringIO(), io.StringIO()
    await service(None, first).run(argv)
    await service(None, second).run(argv)

    assert first.getvalue() == second.getvalue()
    assert first.getvalue()


async def test_timestamp_is_added_by_default(cli, stdout):
    await cli.run(["admissible-count", "--jmax", "2"])

    assert "timestamp=" in stdout.getvalue().splitlines()[0]


async def test_out_writes_file(cli, stdout, tmp_path):
    path = tmp_path / "counts.csv"
    code = await cli.run(["admissible-count", "--jmax", "3", "--out", str(path)])

    assert code == 0
    assert stdout.getvalue() == ""
    assert path.read_text().splitlines()[1] == "J,count,entropy_nats"


async def test_config_file_and_flags(stdout, tmp_path):
    path = tmp_path / "run.env"
    path.write_text("jmax = 5\nseed = 9\n")
    runner = FixedRunner()
    code = await service(runner, stdout).run(["entropy", "--config", str(path), "--seed", "3"])

    assert code == 0
    assert runner.configs[0].jmax == 5
    assert runner.configs[0].seed == 3


# -------------------------
# exit codes
# -------------------------

async def test_pass_is_zero(stdout):
    assert await service(FixedRunner(Verdict.PASS), stdout).run(["vdc"]) == 0


async def test_fail_is_one(stdout):
    assert await service(FixedRunner(Verdict.FAIL), stdout).run(["vdc"]) == 1


async def test_invariant_violation_is_one(stdout):
    runner = FixedRunner(error=InvariantViolationError("count exceeds window count"))

    assert await service(runner, stdout).run(["entropy"]) == 1
    assert stdout.getvalue() == ""


async def test_unexpected_error_is_one(stdout):
    assert await service(FixedRunner(error=KeyError("J")), stdout).run(["entropy"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["entropy", "--jmax", "0"],
        ["sqfree", "--jmax", "25", "--limit", "1000"],
        ["sarnak", "--limit", "1000"],
        ["dual", "--family", "exm1", "--encoding", "symbolic", "--length", "50", "--jmax", "2"],
        ["entropy", "--generator", "file"],
        ["reconstruct", "--sequence", "spiral:1"],
    ],
)
async def test_usage_errors_are_two(cli, argv):
    assert await cli.run(argv) == 2


@pytest.mark.parametrize("argv", [["bogus"], [], ["entropy", "--jmax", "many"], ["entropy", "--engine", "radix"]])
async def test_malformed_command_line_is_two(cli, argv):
    assert await cli.run(argv) == 2


async def test_unknown_config_key_is_two(cli, tmp_path):
    path = tmp_path / "run.env"
    path.write_text("window = 4\n")

    assert await cli.run(["entropy", "--config", str(path)]) == 2


async def test_bare_config_key_is_two(cli, tmp_path):
    path = tmp_path / "run.env"
    path.write_text("jmax\n")

    assert await cli.run(["entropy", "--config", str(path)]) == 2


async def test_help_is_zero(cli):
    assert await cli.run(["--help"]) == 0
