"""Monte Carlo calibration of the empirical constants.

Every trial draws from its own generator, spawned from the caller's seed
with :class:`numpy.random.SeedSequence`, so results are reproducible
bit-for-bit and independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from .errors import DomainError, OptimizerDiverged
from .noise import check_family, make_model, mean_lifetime, sample
from .persistence import sublevel_persistence
from .signals import SignalSpec, generate
from .tables import DEFAULT_TABLES, CalibrationTables, CompensationConstants, Estimate

TEMPLATES = ("wood1", "wood2", "wood3")
DEFAULT_DELTA_GRID = tuple(np.linspace(0.0, 2.0, 11))
START = (0.8, 0.7)


def _seeds(seed, count: int) -> list[np.random.SeedSequence]:
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return root.spawn(count)


def _lifetimes(values: NDArray[np.float64]) -> NDArray[np.float64]:
    return sublevel_persistence(values).lifetimes


def estimate_rho(family: str, n: int = 100_000, trials: int = 10, seed=0) -> tuple[float, float]:
    """Mean-to-median lifetime ratio of pure noise: ``(mean, sd)`` over trials.

    The ratio does not depend on the noise parameter, so unit noise is used.
    """
    family = check_family(family)
    if n < 1000:
        raise DomainError(f"n must be >= 1000, got {n!r}")
    if trials < 2:
        raise DomainError(f"trials must be >= 2, got {trials!r}")
    model = make_model(family, 1.0)
    ratios = np.empty(trials)
    for i, ss in enumerate(_seeds(seed, trials)):
        life = _lifetimes(sample(model, n, ss).values)
        ratios[i] = life.mean() / np.median(life)
    return float(ratios.mean()), float(ratios.std(ddof=1))


def validate_mean_lifetime(family: str, n: int = 100_000, seed=0, param: float = 1.0) -> tuple[float, float]:
    """``(monte_carlo, quadrature)`` mean lifetime for one noise realisation of length ``n``."""
    if n < 10_000:
        raise DomainError(f"n must be >= 10000, got {n!r}")
    model = make_model(family, param)
    mc = float(_lifetimes(sample(model, n, seed).values).mean())
    return mc, mean_lifetime(model)


def template_step(kind: str) -> float:
    """Median absolute first difference of a unit-amplitude template on its default grid."""
    return float(np.median(np.abs(np.diff(generate(SignalSpec(kind)).values))))


@dataclass(frozen=True)
class SweepResult:
    """Mean median lifetime of ``template * A + noise`` against the signal step ``delta``."""

    template: str
    deltas: NDArray[np.float64]
    medians: NDArray[np.float64]
    baseline: float

    def model(self, c1: float, c2: float) -> NDArray[np.float64]:
        d, m = self.deltas, self.medians
        return self.baseline * np.exp(-c1 * (d / (d + m)) ** c2)


def compensation_sweep(
    family: str,
    template: str,
    deltas=DEFAULT_DELTA_GRID,
    trials: int = 100,
    seed=0,
) -> SweepResult:
    """Average median lifetime over ``trials`` noise draws at each signal step in ``deltas``.

    The amplitude for step ``delta`` is ``delta / template_step(template)``,
    so the noise-free signal's median absolute increment equals ``delta``
    (in units of the unit-parameter noise). The zero-step mean is the
    baseline ``L0``.
    """
    family = check_family(family)
    deltas = np.asarray(deltas, dtype=np.float64)
    if np.any(deltas < 0):
        raise DomainError("signal steps must be non-negative")
    shape = generate(SignalSpec(template)).values
    unit = template_step(template)
    model = make_model(family, 1.0)
    seeds = _seeds(seed, deltas.size * trials)
    medians = np.empty(deltas.size)
    for j, d in enumerate(deltas):
        amp = d / unit
        acc = np.empty(trials)
        for k in range(trials):
            eps = sample(model, shape.size, seeds[j * trials + k]).values
            acc[k] = np.median(_lifetimes(amp * shape + eps))
        medians[j] = acc.mean()
    if np.any(deltas == 0):
        baseline = float(medians[deltas == 0].mean())
    else:
        baseline = float(np.median(_lifetimes(sample(model, 100_000, seeds[0]).values)))
    return SweepResult(template, deltas, medians, baseline)


def fit_template(sweeps: list[SweepResult], start=START, xatol: float = 1e-6, maxiter: int = 4000) -> CompensationConstants:
    """Least-squares ``(c1, c2)`` over the pooled sweeps, by Nelder-Mead from ``start``."""
    if not sweeps:
        raise DomainError("no sweeps to fit")
    if all(np.all(s.deltas == 0) for s in sweeps):
        raise DomainError("signal-step range is empty; c1 and c2 are not identifiable")

    def cost(c: NDArray[np.float64]) -> float:
        c1, c2 = c
        if c1 <= 0 or c2 <= 0:
            return math.inf
        return float(sum(np.sum((s.medians - s.model(c1, c2)) ** 2) for s in sweeps))

    c0 = np.asarray(start, dtype=np.float64)
    res = minimize(cost, c0, method="Nelder-Mead", options={"xatol": xatol, "fatol": 1e-14, "maxiter": maxiter})
    if not res.success or not np.isfinite(res.fun) or res.fun > cost(c0):
        raise OptimizerDiverged(f"template fit did not converge: {res.message}")
    return CompensationConstants(float(res.x[0]), float(res.x[1]))


def fit_compensation_constants(
    family: str,
    trials: int = 100,
    seed=0,
    deltas=DEFAULT_DELTA_GRID,
    templates=TEMPLATES,
) -> CompensationConstants:
    """Fit the compensation template for one noise family across the three generic signals."""
    if trials < 10:
        raise DomainError(f"trials must be >= 10, got {trials!r}")
    seeds = _seeds(seed, len(templates))
    sweeps = [compensation_sweep(family, t, deltas, trials, s) for t, s in zip(templates, seeds)]
    return fit_template(sweeps)


def template_rms(sweep: SweepResult, constants: CompensationConstants) -> float:
    """RMS residual of a fitted template, relative to the baseline median."""
    r = sweep.medians - sweep.model(constants.c1, constants.c2)
    return float(np.sqrt(np.mean(r**2)) / sweep.baseline)


def calibrate_compensation(family: str, runs: int = 10, trials: int = 100, seed=0) -> tuple[Estimate, Estimate]:
    """Repeat :func:`fit_compensation_constants` ``runs`` times; ``(c1, c2)`` as mean and 3 sd."""
    if runs < 2:
        raise DomainError(f"runs must be >= 2, got {runs!r}")
    fits = np.array([
        (c.c1, c.c2)
        for c in (fit_compensation_constants(family, trials, s) for s in _seeds(seed, runs))
    ])
    mean = fits.mean(axis=0)
    sd = fits.std(axis=0, ddof=1)
    return Estimate(float(mean[0]), float(3 * sd[0])), Estimate(float(mean[1]), float(3 * sd[1]))


def recalibrate(
    families=None,
    n: int = 100_000,
    rho_trials: int = 10,
    runs: int = 10,
    trials: int = 100,
    seed=0,
    rho: bool = True,
    compensation: bool = True,
) -> CalibrationTables:
    """Recompute the tables for ``families`` (default all); other entries keep their defaults."""
    families = [check_family(f) for f in (families or DEFAULT_TABLES.rho)]
    upd: dict = {"rho": {}, "c1": {}, "c2": {}}
    child = dict(zip(families, _seeds(seed, len(families))))
    for fam in families:
        s_rho, s_comp = child[fam].spawn(2)
        if rho:
            m, sd = estimate_rho(fam, n, rho_trials, s_rho)
            upd["rho"][fam] = Estimate(m, 3 * sd)
        if compensation:
            upd["c1"][fam], upd["c2"][fam] = calibrate_compensation(fam, runs, trials, s_comp)
    upd["provenance"] = {
        "source": "recalibrated",
        "seed": seed if isinstance(seed, int) else None,
        "families": families,
        "n": n,
        "rho_trials": rho_trials,
        "runs": runs,
        "trials": trials,
    }
    return DEFAULT_TABLES.replace(**upd)
