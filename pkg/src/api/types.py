from enum import Enum
from typing import Optional, Callable
import logging

LoggingProvider = Callable[[str, Optional[object]], logging.Logger]


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"

    @staticmethod
    def of(ok: bool) -> "Verdict":
        return Verdict.PASS if ok else Verdict.FAIL


class ExitCode(int, Enum):
    OK = 0
    FAIL = 1
    USAGE = 2
