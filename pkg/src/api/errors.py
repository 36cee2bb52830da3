"""Exception hierarchy shared by every module.

The CLI service maps these onto exit codes, see `src.expcli.service`.
"""


class AnqieError(Exception):
    """Base class for all errors raised by this package."""


class SequenceError(AnqieError, ValueError):
    """A sequence was constructed with values that break its invariants."""


class EmptyOutputError(AnqieError, ValueError):
    """An operator was asked for a shift at least as long as its input."""


class UsageError(AnqieError, ValueError):
    """Invalid parameters or configuration."""


class RefusalError(AnqieError, ValueError):
    """The request lies outside what is computed exhaustively."""


class InsufficientPrecisionError(AnqieError, RuntimeError):
    """A digit stream ran out before the requested precision was reached."""


class ResourceError(AnqieError, RuntimeError):
    """A size budget or an allocation limit was exceeded."""


class SearchBudgetError(AnqieError, RuntimeError):
    """A bounded search exhausted its scan budget."""


class InvariantViolationError(AnqieError, RuntimeError):
    """A proven bound failed to hold. Always an implementation bug."""


class ConstructionError(InvariantViolationError):
    """A constructed sequence does not satisfy its defining identities."""
