"""Noise parameter and cutoff estimation from the diagram of a noisy signal.

The pipeline takes the median finite lifetime (robust to up to half the
pairs belonging to signal), turns it into a mean lifetime with the ratio
``rho``, inverts the mean-lifetime relation of the chosen noise family, and
evaluates the cutoff. Signal slopes shorten noise lifetimes; a one-pass
multiplicative correction ``R`` estimated from the lifetimes above the raw
cutoff undoes most of that.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, EmptyDiagram
from .noise import (
    DEFAULT_ALPHA,
    check_family,
    cutoff,
    make_model,
    mean_lifetime,
    scale_of,
    with_scale,
)
from .persistence import PersistenceDiagram, PersistencePair, sublevel_persistence
from .series import TimeSeries, as_series
from .tables import DEFAULT_TABLES, CalibrationTables, CompensationConstants


class ReliabilityWarning(UserWarning):
    """More than half of the pairs exceed the raw cutoff; the median is unreliable."""


@lru_cache(maxsize=None)
def _unit_mean_lifetime(family: str) -> float:
    return mean_lifetime(make_model(family, 1.0))


def median_lifetime(dgm: PersistenceDiagram | ArrayLike) -> float:
    """Median of the finite lifetimes (mean of the middle two for even counts)."""
    life = dgm.lifetimes if isinstance(dgm, PersistenceDiagram) else np.asarray(dgm, dtype=np.float64)
    if life.size == 0:
        raise EmptyDiagram("diagram has no finite pairs")
    return float(np.median(life))


def estimate_parameter(family: str, median: float, rho: float | None = None) -> float:
    """Noise parameter (sigma, delta, sigma, lambda) implied by a median lifetime.

    The mean lifetime is taken as ``rho * median`` and the family's
    mean-lifetime relation is inverted: lifetimes scale linearly with sigma
    and delta, and inversely with lambda.
    """
    family = check_family(family)
    if not (math.isfinite(median) and median > 0):
        raise DomainError(f"median lifetime must be positive, got {median!r}")
    if rho is None:
        rho = DEFAULT_TABLES.rho_for(family)
    mean = rho * median
    if family == "exponential":
        return _unit_mean_lifetime(family) / mean
    return mean / _unit_mean_lifetime(family)


def cutoff_from_median(
    family: str,
    median: float,
    alpha: float = DEFAULT_ALPHA,
    n: int = 100_000,
    rho: float | None = None,
) -> float:
    """Cutoff for a series of ``n`` samples whose diagram has the given median lifetime."""
    return cutoff(make_model(family, estimate_parameter(family, median, rho)), alpha, n)


def estimate_delta(lifetimes: ArrayLike, raw_cutoff: float, n: int) -> float:
    """Typical per-sample signal step, ``(2 / n) * sum`` of lifetimes above the cutoff."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n!r}")
    life = np.asarray(lifetimes, dtype=np.float64)
    return 2.0 / n * float(np.sum(life[life > raw_cutoff]))


def compensation_factor(delta: float, median: float, constants: CompensationConstants) -> float:
    """``exp(c1 * (delta / (delta + median)) ** c2)``; 1 without signal, at most ``exp(c1)``."""
    if not (delta >= 0 and math.isfinite(delta)):
        raise DomainError(f"delta must be >= 0, got {delta!r}")
    if not (median > 0 and math.isfinite(median)):
        raise DomainError(f"median lifetime must be positive, got {median!r}")
    if delta == 0:
        return 1.0
    return math.exp(constants.c1 * (delta / (delta + median)) ** constants.c2)


@dataclass(frozen=True)
class CutoffReport:
    """Outcome of :func:`anapt`. Field names are the JSON keys."""

    family: str
    alpha: float
    n: int
    median_lifetime: float
    rho: float
    raw_param: float
    raw_cutoff: float
    delta: float
    R: float
    compensated_param: float
    compensated_cutoff: float
    n_pairs: int
    n_signal: int
    n_noise: int
    reliable: bool
    c1: float
    c2: float
    signal_pairs: list[PersistencePair] = field(repr=False)
    noise_pairs: list[PersistencePair] = field(repr=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["signal_pairs"] = [p._asdict() for p in self.signal_pairs]
        out["noise_pairs"] = [p._asdict() for p in self.noise_pairs]
        return out


def signal_mask(dgm: PersistenceDiagram, threshold: float):
    """Boolean mask of pairs whose lifetime exceeds ``threshold``."""
    return dgm.lifetimes > threshold


def anapt(
    series: TimeSeries | ArrayLike | PersistenceDiagram,
    family: str = "gaussian",
    alpha: float = DEFAULT_ALPHA,
    tables: CalibrationTables | None = None,
    n: int | None = None,
) -> CutoffReport:
    """Estimate the noise parameter and cutoff of a noisy series from its own diagram.

    ``series`` may also be a precomputed diagram; ``n`` then defaults to its
    ``n_samples``. The series length (not the pair count) enters the cutoff
    and the step-size estimate.
    """
    family = check_family(family)
    tables = tables or DEFAULT_TABLES
    if isinstance(series, PersistenceDiagram):
        dgm = series
    else:
        dgm = sublevel_persistence(as_series(series))
    n = int(n if n is not None else dgm.n_samples)

    life = dgm.lifetimes
    med = median_lifetime(life)
    rho = tables.rho_for(family)
    raw_param = estimate_parameter(family, med, rho)
    raw_model = make_model(family, raw_param)
    raw_cut = cutoff(raw_model, alpha, n)

    n_above = int(np.count_nonzero(life > raw_cut))
    reliable = n_above <= len(life) / 2
    if not reliable:
        warnings.warn(
            f"{n_above} of {len(life)} pairs exceed the raw cutoff; the median lifetime is not "
            "dominated by noise and the estimate is unreliable",
            ReliabilityWarning,
            stacklevel=2,
        )

    delta = estimate_delta(life, raw_cut, n)
    consts = tables.constants(family)
    R = compensation_factor(delta, med, consts)
    comp_model = with_scale(raw_model, R * scale_of(raw_model))
    comp_cut = R * raw_cut

    mask = life > comp_cut
    return CutoffReport(
        family=family,
        alpha=float(alpha),
        n=n,
        median_lifetime=med,
        rho=rho,
        raw_param=raw_param,
        raw_cutoff=raw_cut,
        delta=delta,
        R=R,
        compensated_param=comp_model.param,
        compensated_cutoff=comp_cut,
        n_pairs=len(life),
        n_signal=int(np.count_nonzero(mask)),
        n_noise=int(len(life) - np.count_nonzero(mask)),
        reliable=reliable,
        c1=consts.c1,
        c2=consts.c2,
        signal_pairs=dgm.select(mask).pairs,
        noise_pairs=dgm.select(~mask).pairs,
    )


__all__ = [
    "CutoffReport",
    "ReliabilityWarning",
    "anapt",
    "compensation_factor",
    "cutoff_from_median",
    "estimate_delta",
    "estimate_parameter",
    "median_lifetime",
    "signal_mask",
]
