"""Additive noise models and the lifetime statistics they induce.

For iid noise with density ``f`` and distribution ``F`` the local minima of a
sampled realisation have density ``3 f (1 - F)**2`` and the local maxima
``3 f F**2``. The mean finite lifetime follows as ``3 * integral F (1 - F)``.

The cutoff ``C`` bounds the largest noise lifetime with probability about
``1 - alpha`` for ``n`` samples. It rests on the approximation
``max(L) <~ max(eps) - min(eps)``, which is not proven in general, and on
splitting ``alpha`` evenly between the two extremes. The default
``alpha = 0.001`` is a conservative choice; values near 0.05 are also
reasonable in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import simpson

from .errors import DomainError
from .series import TimeSeries
from .special import erfc, erfcinv

DEFAULT_ALPHA = 0.001
QUADRATURE_NODES = 1_000_001

FAMILIES = ("gaussian", "uniform", "rayleigh", "exponential")


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


def _check_unit(u: NDArray[np.float64]) -> None:
    if np.any(~((u > 0.0) & (u < 1.0))):
        raise DomainError("probabilities must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class Gaussian:
    sigma: float = 1.0
    mu: float = 0.0

    family: ClassVar[str] = "gaussian"
    symmetric: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", _positive("sigma", self.sigma))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def param(self) -> float:
        return self.sigma

    @property
    def center(self) -> float:
        return self.mu

    def pdf(self, z):
        s = (np.asarray(z, dtype=np.float64) - self.mu) / self.sigma
        return np.exp(-0.5 * s * s) / (self.sigma * math.sqrt(2.0 * math.pi))

    def cdf(self, z):
        s = (np.asarray(z, dtype=np.float64) - self.mu) / (self.sigma * math.sqrt(2.0))
        return 0.5 * erfc(-s)

    def isf(self, p):
        """``F^-1(1 - p)``, accurate for tiny ``p``."""
        p = np.asarray(p, dtype=np.float64)
        return self.mu + math.sqrt(2.0) * self.sigma * erfcinv(2.0 * p)

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=np.float64)
        _check_unit(u)
        return self.mu - math.sqrt(2.0) * self.sigma * erfcinv(2.0 * u)


@dataclass(frozen=True)
class Uniform:
    """Uniform noise of width ``delta`` centred on zero."""

    delta: float = 1.0

    family: ClassVar[str] = "uniform"
    symmetric: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", _positive("delta", self.delta))

    @property
    def param(self) -> float:
        return self.delta

    @property
    def center(self) -> float:
        return 0.0

    def pdf(self, z):
        z = np.asarray(z, dtype=np.float64)
        half = self.delta / 2.0
        return np.where((z >= -half) & (z <= half), 1.0 / self.delta, 0.0)

    def cdf(self, z):
        z = np.asarray(z, dtype=np.float64)
        return np.clip((2.0 * z + self.delta) / (2.0 * self.delta), 0.0, 1.0)

    def isf(self, p):
        return self.delta * (0.5 - np.asarray(p, dtype=np.float64))

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=np.float64)
        _check_unit(u)
        return self.delta * (u - 0.5)


@dataclass(frozen=True)
class Rayleigh:
    sigma: float = 1.0

    family: ClassVar[str] = "rayleigh"
    symmetric: ClassVar[bool] = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", _positive("sigma", self.sigma))

    @property
    def param(self) -> float:
        return self.sigma

    def pdf(self, z):
        z = np.asarray(z, dtype=np.float64)
        zp = np.maximum(z, 0.0)
        return np.where(z >= 0, zp / self.sigma**2 * np.exp(-(zp**2) / (2.0 * self.sigma**2)), 0.0)

    def cdf(self, z):
        z = np.maximum(np.asarray(z, dtype=np.float64), 0.0)
        return -np.expm1(-(z**2) / (2.0 * self.sigma**2))

    def isf(self, p):
        return self.sigma * np.sqrt(-2.0 * np.log(np.asarray(p, dtype=np.float64)))

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=np.float64)
        _check_unit(u)
        return self.sigma * np.sqrt(-2.0 * np.log1p(-u))


@dataclass(frozen=True)
class Exponential:
    lam: float = 1.0

    family: ClassVar[str] = "exponential"
    symmetric: ClassVar[bool] = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", _positive("lambda", self.lam))

    @property
    def param(self) -> float:
        return self.lam

    def pdf(self, z):
        z = np.asarray(z, dtype=np.float64)
        return np.where(z >= 0, self.lam * np.exp(-self.lam * np.maximum(z, 0.0)), 0.0)

    def cdf(self, z):
        z = np.maximum(np.asarray(z, dtype=np.float64), 0.0)
        return -np.expm1(-self.lam * z)

    def isf(self, p):
        return -np.log(np.asarray(p, dtype=np.float64)) / self.lam

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=np.float64)
        _check_unit(u)
        return -np.log1p(-u) / self.lam


NoiseModel = Union[Gaussian, Uniform, Rayleigh, Exponential]

_BY_FAMILY = {cls.family: cls for cls in (Gaussian, Uniform, Rayleigh, Exponential)}


def check_family(family: str) -> str:
    key = family.lower()
    if key not in _BY_FAMILY:
        raise DomainError(f"unknown noise family {family!r}; expected one of {', '.join(FAMILIES)}")
    return key


def make_model(family: str, param: float = 1.0) -> NoiseModel:
    """Model of the given family from its single parameter (sigma, delta, sigma or lambda)."""
    return _BY_FAMILY[check_family(family)](param)


def pdf(model: NoiseModel, z):
    return model.pdf(z)


def cdf(model: NoiseModel, z):
    return model.cdf(z)


def inverse_cdf(model: NoiseModel, u):
    return model.inverse_cdf(u)


def birth_density(model: NoiseModel, z):
    """Density of the heights of local minima of an iid noise sequence."""
    F = model.cdf(z)
    return 3.0 * model.pdf(z) * (1.0 - F) ** 2


def death_density(model: NoiseModel, z):
    """Density of the heights of local maxima of an iid noise sequence."""
    F = model.cdf(z)
    return 3.0 * model.pdf(z) * F**2


def _simpson_mean_lifetime(model: NoiseModel, lo: float, hi: float) -> float:
    z = np.linspace(lo, hi, QUADRATURE_NODES)
    F = model.cdf(z)
    return 3.0 * float(simpson(F * (1.0 - F), x=z))


def mean_lifetime(model: NoiseModel) -> float:
    """Expected finite lifetime in the diagram of pure noise from ``model``.

    Closed forms for the uniform (``delta / 2``) and exponential
    (``3 / (2 lambda)``) models; composite Simpson with 10**6 + 1 nodes on
    ``mu +- 10 sigma`` (Gaussian) or ``[0, 20 sigma]`` (Rayleigh) otherwise.
    """
    if isinstance(model, Uniform):
        return model.delta / 2.0
    if isinstance(model, Exponential):
        return 1.5 / model.lam
    if isinstance(model, Gaussian):
        return _simpson_mean_lifetime(model, model.mu - 10.0 * model.sigma, model.mu + 10.0 * model.sigma)
    return _simpson_mean_lifetime(model, 0.0, 20.0 * model.sigma)


def _tail(alpha: float, n: int) -> tuple[float, float]:
    """``(log q, 1 - q)`` for ``q = (1 - sqrt(alpha)) ** (1 / n)``, both without cancellation."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    log_q = math.log1p(-math.sqrt(alpha)) / int(n)
    return log_q, -math.expm1(log_q)


def cutoff_generic(model: NoiseModel, alpha: float = DEFAULT_ALPHA, n: int = 100_000, symmetric: bool | None = None) -> float:
    """Cutoff from the distribution's inverse CDF alone.

    ``symmetric=True`` uses ``2 (F^-1(q) - centre)``, ``False`` the general
    ``F^-1(q) - F^-1(1 - q)``; the default follows the model.
    """
    _, one_minus_q = _tail(alpha, n)
    if symmetric is None:
        symmetric = model.symmetric
    upper = float(model.isf(one_minus_q))
    if symmetric:
        return 2.0 * (upper - model.center)
    q = 1.0 - one_minus_q
    lower = float(model.isf(q))
    return upper - lower


def cutoff(model: NoiseModel, alpha: float = DEFAULT_ALPHA, n: int = 100_000) -> float:
    """Lifetime threshold that pure noise of length ``n`` exceeds with probability ~``alpha``.

    Examples
    --------
    >>> round(cutoff(Uniform(1.0), 0.001, 100_000), 8)
    0.99999936
    """
    log_q, one_minus_q = _tail(alpha, n)
    if isinstance(model, Gaussian):
        # 2^{3/2} sigma erfinv(2q - 1), with 1 - (2q - 1) = 2 (1 - q)
        return 2.0 * math.sqrt(2.0) * model.sigma * float(erfcinv(2.0 * one_minus_q))
    if isinstance(model, Uniform):
        return model.delta * (1.0 - 2.0 * one_minus_q)
    if isinstance(model, Rayleigh):
        return model.sigma * (math.sqrt(-2.0 * math.log(one_minus_q)) - math.sqrt(-2.0 * log_q))
    if isinstance(model, Exponential):
        return (log_q - math.log(one_minus_q)) / model.lam
    return cutoff_generic(model, alpha, n)


def sample(model: NoiseModel, n: int, seed=None) -> TimeSeries:
    """``n`` iid draws by inverting the CDF of seeded PCG64 uniforms."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(int(n))
    # random() can return exactly 0, where the inverse CDF is unbounded
    u[u == 0.0] = 2.0**-54
    return TimeSeries(model.inverse_cdf(u))


def as_model(model_or_family: NoiseModel | str, param: float = 1.0) -> NoiseModel:
    if isinstance(model_or_family, str):
        return make_model(model_or_family, param)
    return model_or_family


def scale_of(model: NoiseModel) -> float:
    """Length scale of the model: lifetimes and cutoffs are linear in it."""
    if isinstance(model, Exponential):
        return 1.0 / model.lam
    return model.param


def with_scale(model: NoiseModel, scale: float) -> NoiseModel:
    """Same family with the length scale replaced."""
    if isinstance(model, Exponential):
        return Exponential(1.0 / scale)
    if isinstance(model, Gaussian):
        return Gaussian(scale, model.mu)
    return type(model)(scale)
