from .types import LoggingProvider, Verdict, ExitCode
from .undefined import UNDEFINED, UndefinedNoneOr, UndefinedOr
from .errors import *
