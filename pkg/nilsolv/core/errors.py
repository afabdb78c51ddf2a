"""Error hierarchy shared by every nilsolv module."""

from typing import Optional


class NilsolvError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code = 1
    kind = "error"


class DomainError(NilsolvError):
    """Invalid argument, singular matrix, nonpositive parameter or malformed input."""

    exit_code = 1
    kind = "domain"


class UnsupportedCaseError(DomainError):
    """(m, p) lies outside the admissible-metric coverage."""

    kind = "unsupported"


class PreconditionError(DomainError):
    """An operation was called on data that does not satisfy its precondition."""

    kind = "precondition"


class ResourceError(NilsolvError):
    """A configured size ceiling would be exceeded."""

    exit_code = 2
    kind = "resource"

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required


class UndecidedError(NilsolvError):
    """The solver could not certify either outcome."""

    exit_code = 3
    kind = "undecided"
