"""Statistical noise cutoffs for sublevel-set persistence of time series."""

from __future__ import annotations

from .distance import bottleneck_distance
from .errors import (
    AnaptError,
    DegenerateSignal,
    DomainError,
    EmptyDiagram,
    IntegrationOverflow,
    NonFiniteSample,
    OptimizerDiverged,
    OracleSizeExceeded,
    ParseError,
    SeriesTooShort,
)
from .estimator import (
    CutoffReport,
    ReliabilityWarning,
    anapt,
    compensation_factor,
    cutoff_from_median,
    estimate_delta,
    estimate_parameter,
    median_lifetime,
)
from .noise import (
    DEFAULT_ALPHA,
    Exponential,
    Gaussian,
    Rayleigh,
    Uniform,
    cutoff,
    make_model,
    mean_lifetime,
    sample,
)
from .persistence import (
    ExtremaList,
    PersistenceDiagram,
    PersistencePair,
    extract_extrema,
    lifetimes,
    sublevel_persistence,
    sublevel_persistence_bruteforce,
)
from .series import TimeSeries
from .tables import DEFAULT_TABLES, CalibrationTables, CompensationConstants, Estimate

__version__ = "0.1.0"

__all__ = [
    "AnaptError",
    "CalibrationTables",
    "CompensationConstants",
    "CutoffReport",
    "DEFAULT_ALPHA",
    "DEFAULT_TABLES",
    "DegenerateSignal",
    "DomainError",
    "EmptyDiagram",
    "Estimate",
    "Exponential",
    "ExtremaList",
    "Gaussian",
    "IntegrationOverflow",
    "NonFiniteSample",
    "OptimizerDiverged",
    "OracleSizeExceeded",
    "ParseError",
    "PersistenceDiagram",
    "PersistencePair",
    "Rayleigh",
    "ReliabilityWarning",
    "SeriesTooShort",
    "TimeSeries",
    "Uniform",
    "anapt",
    "bottleneck_distance",
    "compensation_factor",
    "cutoff",
    "cutoff_from_median",
    "estimate_delta",
    "estimate_parameter",
    "extract_extrema",
    "lifetimes",
    "make_model",
    "mean_lifetime",
    "median_lifetime",
    "sample",
    "sublevel_persistence",
    "sublevel_persistence_bruteforce",
]
