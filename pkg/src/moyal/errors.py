"""Exception types shared across the package."""

from __future__ import annotations


class MoyalError(Exception):
    """Base class for all errors raised by this package."""


class SpaceMismatchError(MoyalError):
    """Two polynomials live over different variable spaces."""


class DimensionMismatchError(MoyalError):
    """Phase-space dimensions of the operands disagree."""


class DegreeGuardError(MoyalError):
    """An operation would exceed the configured total-degree bound."""


class NonterminatingSeriesError(MoyalError):
    """The generator of an exponential series has a constant term.

    A constant term would contribute an overall scalar exponential, which is
    not a polynomial; the caller must factor it out first.
    """


class PoleAtMuZeroError(MoyalError):
    """A coefficient has a pole at mu = 0; the classical limit does not exist."""

    def __init__(self, message: str, term: str | None = None):
        super().__init__(message)
        self.term = term


class FactorizationError(MoyalError):
    """A kernel-factorization stage failed; carries the stage label and witness."""

    def __init__(self, stage: str, message: str, witness=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.witness = witness


class ExpressionError(MoyalError):
    """A parse or evaluation error in the expression language."""

    def __init__(self, message: str, line: int = 1, column: int = 0, token: str = ""):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.token = token
