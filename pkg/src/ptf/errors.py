"""Shared exception types.

Exit-code mapping used by the CLI: InvalidInputError -> 2 (usage),
VerificationError -> 1, ResourceLimitError -> 3.
"""


class PTFError(Exception):
    """Base class for library errors."""


class InvalidInputError(PTFError, ValueError):
    """Bad argument: wrong dimension, zero normal, invalid degree, ..."""


class DimensionMismatchError(InvalidInputError):
    """Operands disagree on dimension."""


class ResourceLimitError(PTFError, RuntimeError):
    """Request outside the supported desk-scale envelope."""


class VerificationError(PTFError, RuntimeError):
    """A claimed certificate/bound/fixture failed exact re-verification."""


class UndecidedComparisonError(PTFError, RuntimeError):
    """Interval comparison still undecided at the maximum allowed precision."""
