"""Exception types shared across the package."""


class RenyiParryError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RenyiParryError, ValueError):
    """An argument lies outside the domain of an operation."""


class PrecisionExceeded(RenyiParryError):
    """Ball refinement hit the precision cap without deciding."""


class NotClassified(RenyiParryError):
    """The expansion was not classified within its budget."""


class InsufficientDigits(RenyiParryError):
    """More digits are needed than the expansion provides."""


class Inconclusive(RenyiParryError):
    """A certified decision could not be reached at the current policy."""

    def __init__(self, message: str, details=None):
        super().__init__(message)
        self.details = details


class StructureError(RenyiParryError):
    """A structural precondition on polynomials or expansions failed."""


class NotUnique(RenyiParryError):
    """A zero count differs from the expected value one."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class ParseError(RenyiParryError, ValueError):
    """Malformed polynomial or catalog text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
