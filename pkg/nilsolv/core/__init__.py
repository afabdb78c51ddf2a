"""Core state, errors and shared utilities for nilsolv."""

from .errors import DomainError, NilsolvError, PreconditionError, ResourceError, UndecidedError, UnsupportedCaseError
from .logs import configure_logging
from .state import CaseState

__all__ = [
    "CaseState",
    "DomainError",
    "NilsolvError",
    "PreconditionError",
    "ResourceError",
    "UndecidedError",
    "UnsupportedCaseError",
    "configure_logging",
]
