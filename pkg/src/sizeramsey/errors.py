"""Exception hierarchy shared by all modules."""


class SizeRamseyError(Exception):
    """Base class for every error raised by this package."""


class InputError(SizeRamseyError, ValueError):
    """A caller passed a malformed or inconsistent value."""


class GraphParseError(InputError):
    """A graph or coloring file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeGuardError(InputError):
    """An exhaustive routine was asked to run on an instance above its guard."""


class CertificateError(SizeRamseyError):
    """A construction could not certify one of its promised bounds."""


class PartitionInvariantError(CertificateError):
    """A budget of the recursive partition was violated."""


class BudgetError(SizeRamseyError):
    """A search ran out of its time budget before finding a certificate."""
