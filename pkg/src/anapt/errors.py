"""Exception hierarchy shared by every module."""

from __future__ import annotations


class AnaptError(Exception):
    """Base class for all errors raised by this package."""

    code = "anapt_error"


class DomainError(AnaptError, ValueError):
    """An argument lies outside the domain of the operation."""

    code = "domain_error"


class SeriesTooShort(DomainError):
    code = "series_too_short"


class NonFiniteSample(DomainError):
    code = "non_finite_sample"


class OracleSizeExceeded(DomainError):
    code = "oracle_size_exceeded"


class EmptyDiagram(DomainError):
    code = "empty_diagram"


class DegenerateSignal(DomainError):
    code = "degenerate_signal"


class IntegrationOverflow(AnaptError, ArithmeticError):
    code = "integration_overflow"


class OptimizerDiverged(AnaptError, RuntimeError):
    code = "optimizer_diverged"


class ParseError(AnaptError, ValueError):
    code = "parse_error"
