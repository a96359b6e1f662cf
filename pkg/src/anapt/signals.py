"""Deterministic test signals, noise injection and SNR conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DegenerateSignal, DomainError, IntegrationOverflow
from .noise import NoiseModel, sample
from .series import TimeSeries

KINDS = ("wood1", "wood2", "wood3", "quasiperiodic", "lorenz_x", "sinusoid")

# default domains; the three generic templates use 20 Hz
_DEFAULT_DOMAIN = {
    "wood1": (3.1, 20.4),
    "wood2": (3.1, 20.4),
    "wood3": (-10.0, 10.0),
    "quasiperiodic": (0.0, 15.0),
    "sinusoid": (0.0, 15.0),
}
_DEFAULT_RATE = {"wood1": 20.0, "wood2": 20.0, "wood3": 20.0, "quasiperiodic": 40.0, "sinusoid": 40.0}


@dataclass(frozen=True)
class LorenzParams:
    sigma_l: float = 10.0
    beta: float = 8.0 / 3.0
    rho_l: float = 181.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.sigma_l, self.beta, self.rho_l)):
            raise DomainError("Lorenz parameters must be finite")


@dataclass(frozen=True)
class SignalSpec:
    """Description of a generated signal.

    ``extra`` carries kind-specific settings: ``frequency`` (Hz, sinusoid,
    default 0.5 so that the argument is ``pi t``), and for ``lorenz_x`` the
    keys ``params``, ``keep_last`` and ``initial``. For ``lorenz_x`` the
    domain length is the integration time.
    """

    kind: str
    amplitude: float = 1.0
    t_a: float | None = None
    t_b: float | None = None
    sample_rate: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"unknown signal kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "lorenz_x":
            defaults = ((0.0, 200.0), 200.0)
        else:
            defaults = (_DEFAULT_DOMAIN[self.kind], _DEFAULT_RATE[self.kind])
        if self.t_a is None:
            object.__setattr__(self, "t_a", defaults[0][0])
        if self.t_b is None:
            object.__setattr__(self, "t_b", defaults[0][1])
        if self.sample_rate is None:
            object.__setattr__(self, "sample_rate", defaults[1])
        if not (self.t_b > self.t_a):
            raise DomainError(f"empty domain [{self.t_a}, {self.t_b}]")
        if not (self.sample_rate > 0 and math.isfinite(self.sample_rate)):
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if not math.isfinite(self.amplitude):
            raise DomainError("amplitude must be finite")


def sample_times(t_a: float, t_b: float, sample_rate: float) -> np.ndarray:
    """Uniform grid ``t_a + k / sample_rate`` covering ``[t_a, t_b]``, both ends included."""
    n = int(round((t_b - t_a) * sample_rate)) + 1
    return t_a + np.arange(n) / sample_rate


def wood1(t):
    return t - t**3 / 3.0


def wood2(t):
    return np.sin(t) + np.sin(2.0 * t / 3.0)


def wood3(t):
    t = np.asarray(t, dtype=np.float64)
    return -sum(np.sin((i + 1) * t + i) for i in range(1, 6))


def quasiperiodic(t):
    return np.sin(np.pi * t) + np.sin(t)


_TEMPLATES = {"wood1": wood1, "wood2": wood2, "wood3": wood3, "quasiperiodic": quasiperiodic}


def generate(spec: SignalSpec) -> TimeSeries:
    """Evaluate ``spec`` on its uniform grid; the amplitude multiplies the template."""
    if spec.kind == "lorenz_x":
        ex = spec.extra
        x = lorenz_x(
            ex.get("params", LorenzParams()),
            spec.sample_rate,
            spec.t_b - spec.t_a,
            ex.get("keep_last", 2500),
            ex.get("initial", (1.0, 1.0, 1.0)),
        )
        return TimeSeries(spec.amplitude * x.values, spec.sample_rate, x.t0 + spec.t_a)
    t = sample_times(spec.t_a, spec.t_b, spec.sample_rate)
    if spec.kind == "sinusoid":
        f = float(spec.extra.get("frequency", 0.5))
        y = np.sin(2.0 * np.pi * f * t + float(spec.extra.get("phase", 0.0)))
    else:
        y = _TEMPLATES[spec.kind](t)
    return TimeSeries(spec.amplitude * y, spec.sample_rate, spec.t_a)


@numba.njit(cache=True)
def _rk4_x(s, h, steps, sig, beta, rho):
    # second value is the step at which the state blew up, -1 if none
    xs = np.empty(steps + 1)
    x, y, z = s[0], s[1], s[2]
    xs[0] = x
    for k in range(1, steps + 1):
        a1 = sig * (y - x)
        b1 = x * (rho - z) - y
        c1 = x * y - beta * z
        x2, y2, z2 = x + 0.5 * h * a1, y + 0.5 * h * b1, z + 0.5 * h * c1
        a2 = sig * (y2 - x2)
        b2 = x2 * (rho - z2) - y2
        c2 = x2 * y2 - beta * z2
        x3, y3, z3 = x + 0.5 * h * a2, y + 0.5 * h * b2, z + 0.5 * h * c2
        a3 = sig * (y3 - x3)
        b3 = x3 * (rho - z3) - y3
        c3 = x3 * y3 - beta * z3
        x4, y4, z4 = x + h * a3, y + h * b3, z + h * c3
        a4 = sig * (y4 - x4)
        b4 = x4 * (rho - z4) - y4
        c4 = x4 * y4 - beta * z4
        x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        y += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        z += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        if not (abs(x) < 1e12 and abs(y) < 1e12 and abs(z) < 1e12):
            return xs[:k], k
        xs[k] = x
    return xs, -1


def lorenz_x(
    params: LorenzParams = LorenzParams(),
    sample_rate: float = 200.0,
    duration: float = 200.0,
    keep_last: int = 2500,
    initial=(1.0, 1.0, 1.0),
) -> TimeSeries:
    """x-component of the Lorenz system by fixed-step RK4 at the sampling step.

    The state at ``t = 0`` is ``initial``; samples at ``k / sample_rate`` for
    ``k = 0 .. round(duration * sample_rate)`` are produced and the last
    ``keep_last`` returned, discarding the transient.
    """
    steps = int(round(duration * sample_rate))
    if not (1 <= keep_last <= steps + 1):
        raise DomainError(f"keep_last must lie in [1, {steps + 1}], got {keep_last!r}")
    h = 1.0 / sample_rate
    xs, failed = _rk4_x(np.array(initial, dtype=np.float64), h, steps, params.sigma_l, params.beta, params.rho_l)
    if failed >= 0:
        raise IntegrationOverflow(f"trajectory diverged at t = {failed * h:g} s")
    first = steps + 1 - keep_last
    return TimeSeries(xs[first:], sample_rate, first * h)


def sigma_from_snr(signal: TimeSeries | np.ndarray, snr_db: float) -> float:
    """Noise standard deviation giving ``snr_db = 20 log10(rms / sigma)``, rms about the mean."""
    x = signal.values if isinstance(signal, TimeSeries) else np.asarray(signal, dtype=np.float64)
    rms = float(np.sqrt(np.mean((x - x.mean()) ** 2)))
    if rms == 0.0:
        raise DegenerateSignal("signal has zero variance; SNR is undefined")
    return rms * 10.0 ** (-snr_db / 20.0)


def add_noise(signal: TimeSeries, model: NoiseModel, seed=None) -> TimeSeries:
    """``signal + eps`` with ``eps`` drawn by :func:`anapt.noise.sample`."""
    eps = sample(model, len(signal), seed).values
    return signal.with_values(signal.values + eps)
