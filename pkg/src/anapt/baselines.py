"""Reference methods for separating signal from noise in a persistence diagram.

* persistent entropy: a parameter-free lifetime-share rule;
* bottleneck bootstrap: resample low-pass residuals and threshold at twice a
  percentile of the bottleneck distances;
* residual sigma estimators: low-pass filter or downsampled spline fit,
  then the standard deviation of what is left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicSpline

from .distance import bottleneck_distance
from .errors import DomainError, EmptyDiagram, SeriesTooShort
from .persistence import PersistenceDiagram, sublevel_persistence
from .series import TimeSeries, as_series

SIGNAL = "signal"
NOISE = "noise"


def persistent_entropy_separation(dgm: PersistenceDiagram | NDArray) -> NDArray[np.bool_]:
    """Label pairs as signal (True) or noise (False) by their share of total lifetime.

    With ``p_i = l_i / sum(l)`` and perplexity ``P = exp(-sum p_i ln p_i)``,
    pair ``i`` is signal iff ``p_i > 1 / P``. Equal lifetimes give ``p_i = 1 / P``
    and are all noise.

    Examples
    --------
    >>> persistent_entropy_separation([100.0, 1.0, 1.0, 1.0, 1.0]).tolist()
    [True, False, False, False, False]
    """
    life = dgm.lifetimes if isinstance(dgm, PersistenceDiagram) else np.asarray(dgm, dtype=np.float64)
    if life.size < 2:
        raise EmptyDiagram(f"entropy separation needs at least 2 finite pairs, got {life.size}")
    # equal lifetimes give p_i == 1 / P exactly, which rounding could tip either way
    if np.all(life == life[0]):
        return np.zeros(life.size, dtype=bool)
    p = life / life.sum()
    nz = p[p > 0]
    entropy = -float(np.sum(nz * np.log(nz)))
    return p > math.exp(-entropy)


def _spectrum_freqs(n: int, sample_rate: float) -> NDArray[np.float64]:
    return np.fft.rfftfreq(n, d=1.0 / sample_rate)


def butterworth_fft_filter(series: TimeSeries, cutoff_hz: float, order: int = 4) -> TimeSeries:
    """Zero-phase low-pass with Butterworth magnitude ``1 / sqrt(1 + (f / fc) ** (2 order))``.

    The gain is applied to the FFT of the even extension ``x0 .. x_{n-1} .. x1``
    so that the end mismatch of a non-periodic record does not leak into
    every frequency bin.
    """
    series = as_series(series)
    if not (cutoff_hz > 0 and math.isfinite(cutoff_hz)):
        raise DomainError(f"cutoff_hz must be positive, got {cutoff_hz!r}")
    if int(order) != order or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")
    n = len(series)
    x = series.values
    ext = np.concatenate([x, x[-2:0:-1]]) if n > 2 else x
    m = ext.size
    freqs = _spectrum_freqs(m, series.sample_rate)
    gain = 1.0 / np.sqrt(1.0 + (freqs / cutoff_hz) ** (2 * int(order)))
    out = np.fft.irfft(np.fft.rfft(ext) * gain, n=m)[:n]
    return series.with_values(out)


def dominant_frequency(series: TimeSeries) -> float:
    """Frequency of the largest non-DC spectral peak."""
    series = as_series(series)
    x = series.values - series.values.mean()
    power = np.abs(np.fft.rfft(x))
    if power.size < 2:
        raise SeriesTooShort("series too short for a spectrum")
    k = 1 + int(np.argmax(power[1:]))
    return float(_spectrum_freqs(len(series), series.sample_rate)[k])


def noise_floor_frequency(series: TimeSeries, factor: float = 10.0, width: float = 0.01) -> float:
    """Highest frequency at which the spectrum still stands ``factor`` above the noise floor.

    The floor is the median periodogram value over the top half of the band
    (above ``fs / 4``), where white noise dominates a band-limited signal.
    The periodogram of the even extension is smoothed with a running mean
    over ``width`` of the bins before the comparison. Suited to broadband
    signals, for which a multiple of the dominant frequency cuts into the
    signal.
    """
    series = as_series(series)
    x = series.values
    if x.size < 16:
        raise SeriesTooShort(f"need at least 16 samples, got {x.size}")
    ext = np.concatenate([x, x[-2:0:-1]])
    power = np.abs(np.fft.rfft(ext - ext.mean())) ** 2
    freqs = _spectrum_freqs(ext.size, series.sample_rate)
    floor = float(np.median(power[freqs > series.sample_rate / 4.0]))
    w = max(1, int(width * power.size))
    smooth = np.convolve(power, np.ones(w) / w, mode="same")
    above = np.nonzero(smooth > factor * floor)[0]
    if above.size == 0 or above[-1] == 0:
        raise DomainError("no spectral content above the noise floor")
    return float(freqs[above[-1]])


CUTOFF_RULES = ("dominant", "noise_floor")


def resolve_cutoff(series: TimeSeries, cutoff_hz: float | str | None) -> float:
    """Filter cutoff in Hz from a number or a rule name.

    ``None`` or ``"noise_floor"`` gives :func:`noise_floor_frequency`;
    ``"dominant"`` gives twice the dominant non-DC frequency, which cuts
    into signals whose spectrum extends well past their main peak.
    """
    if cutoff_hz is None or cutoff_hz == "noise_floor":
        return noise_floor_frequency(series)
    if cutoff_hz == "dominant":
        return 2.0 * dominant_frequency(series)
    if isinstance(cutoff_hz, str):
        raise DomainError(f"unknown cutoff rule {cutoff_hz!r}; expected a frequency or one of {CUTOFF_RULES}")
    return float(cutoff_hz)


@dataclass(frozen=True)
class BootstrapConfig:
    """Settings of :func:`bootstrap_cutoff`.

    ``filter_cutoff_hz`` is a frequency in Hz or a rule name accepted by
    :func:`resolve_cutoff`; the default is the noise-floor rule.
    """

    resamples: int = 1000
    percentile: float = 0.95
    filter_cutoff_hz: float | str | None = None
    filter_order: int = 4
    seed: int | None = 0

    def __post_init__(self) -> None:
        if int(self.resamples) != self.resamples or self.resamples < 1:
            raise DomainError(f"resamples must be >= 1, got {self.resamples!r}")
        if not (0.0 < self.percentile < 1.0):
            raise DomainError(f"percentile must lie in (0, 1), got {self.percentile!r}")


@dataclass(frozen=True)
class BootstrapResult:
    threshold: float
    distances: NDArray[np.float64]
    filter_cutoff_hz: float


def bootstrap(series: TimeSeries, cfg: BootstrapConfig = BootstrapConfig()) -> BootstrapResult:
    """Bottleneck bootstrap with all intermediate distances; see :func:`bootstrap_cutoff`."""
    series = as_series(series)
    fc = resolve_cutoff(series, cfg.filter_cutoff_hz)
    if fc <= 0:
        raise DomainError("could not determine a positive filter cutoff; pass filter_cutoff_hz")
    smooth = butterworth_fft_filter(series, fc, cfg.filter_order).values
    x = series.values
    resid = smooth - x
    base = sublevel_persistence(series)

    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.resamples)
    dist = np.empty(cfg.resamples)
    for i, ss in enumerate(seeds):
        rng = np.random.Generator(np.random.PCG64(ss))
        star = smooth + rng.choice(resid, size=resid.size, replace=True)
        # the boundary sentinels depend on the direction of the end edges
        star[:2] = x[:2]
        star[-2:] = x[-2:]
        dist[i] = bottleneck_distance(base, sublevel_persistence(star))
    dist.sort()
    threshold = 2.0 * float(np.quantile(dist, cfg.percentile))
    return BootstrapResult(threshold, dist, float(fc))


def bootstrap_cutoff(series: TimeSeries, cfg: BootstrapConfig = BootstrapConfig()) -> float:
    """Lifetime threshold from residual-resampling bootstrap of bottleneck distances.

    The series is low-pass filtered to ``s_hat``; residuals ``s_hat - x`` are
    resampled with replacement onto ``s_hat`` (the two outermost samples at
    each end held at the observed values), and the bottleneck distance from each resample's
    diagram to the diagram of the observed series is recorded. The threshold is twice the
    ``cfg.percentile`` quantile of those distances.
    """
    return bootstrap(series, cfg).threshold


def _acf_delay(x: NDArray[np.float64]) -> int:
    """First lag at which the sample autocorrelation drops below 1/e."""
    y = x - x.mean()
    n = y.size
    denom = float(np.dot(y, y))
    if denom == 0.0:
        return n
    m = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(y, m)
    acf = np.fft.irfft(spec * np.conj(spec), m)[:n] / denom
    below = np.nonzero(acf < math.exp(-1.0))[0]
    return int(below[0]) if below.size else n


def spline_step(x: NDArray[np.float64]) -> int:
    """Largest downsampling step whose downsampled series still has ACF delay >= 2.

    Falls back to 2 when no step reaches that delay (e.g. white noise).
    """
    best = 2
    for k in range(2, x.size // 4 + 1):
        if _acf_delay(x[::k]) >= 2:
            best = k
        else:
            break
    return best


def spline_residual_sigma(series: TimeSeries) -> float:
    """Residual sd of a natural cubic spline through a downsampled copy of the series.

    Only samples that are not spline knots enter the sd, since the fit
    passes through the knots exactly.
    """
    series = as_series(series)
    x = series.values
    if x.size < 16:
        raise SeriesTooShort(f"need at least 16 samples, got {x.size}")
    k = spline_step(x)
    idx = np.arange(0, x.size, k)
    if idx[-1] != x.size - 1:
        idx = np.append(idx, x.size - 1)
    t = np.arange(x.size, dtype=np.float64)
    fit = CubicSpline(t[idx], x[idx], bc_type="natural")(t)
    off = np.ones(x.size, dtype=bool)
    off[idx] = False
    return float(np.std(x[off] - fit[off]))


def lowpass_residual_sigma(series: TimeSeries, cutoff_hz: float | str | None = None, order: int = 4) -> float:
    """Residual sd after :func:`butterworth_fft_filter`.

    ``cutoff_hz`` is resolved by :func:`resolve_cutoff`.
    """
    series = as_series(series)
    if len(series) < 16:
        raise SeriesTooShort(f"need at least 16 samples, got {len(series)}")
    fc = resolve_cutoff(series, cutoff_hz)
    smooth = butterworth_fft_filter(series, fc, order)
    return float(np.std(series.values - smooth.values))
