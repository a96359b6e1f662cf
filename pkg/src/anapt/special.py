"""Error function inverses.

``erfinv`` and ``erfcinv`` start from Giles' single-precision polynomial
approximation (or an asymptotic guess in the far tail) and polish it with
Newton steps on ``erf`` or on ``log(erfc)``. The complementary form keeps
full relative accuracy for arguments within a few ulps of 1, which is where
the Gaussian cutoff lives.
Both are numba ufuncs: they accept scalars or arrays.
"""

from __future__ import annotations

import math

import numba

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_SQRT_PI = math.sqrt(math.pi)


@numba.njit(cache=True)
def _giles(y, w):
    # y * p(w), w = -log((1 - y)(1 + y)); relative error ~1e-7
    if w < 5.0:
        w = w - 2.5
        p = 2.81022636e-08
        p = 3.43273939e-07 + p * w
        p = -3.5233877e-06 + p * w
        p = -4.39150654e-06 + p * w
        p = 0.00021858087 + p * w
        p = -0.00125372503 + p * w
        p = -0.00417768164 + p * w
        p = 0.246640727 + p * w
        p = 1.50140941 + p * w
    else:
        w = math.sqrt(w) - 3.0
        p = -0.000200214257
        p = 0.000100950558 + p * w
        p = 0.00134934322 + p * w
        p = -0.00367342844 + p * w
        p = 0.00573950773 + p * w
        p = -0.0076224613 + p * w
        p = 0.00943887047 + p * w
        p = 1.00167406 + p * w
        p = 2.83297682 + p * w
    return p * y


@numba.njit(cache=True)
def _log_erfc(x):
    v = math.erfc(x)
    if v > 1e-300:
        return math.log(v)
    # asymptotic series once erfc underflows
    t = 1.0 / (2.0 * x * x)
    return -x * x - math.log(x * _SQRT_PI) + math.log1p(-t * (1.0 - 3.0 * t * (1.0 - 5.0 * t)))


@numba.njit(cache=True)
def _erfcinv_small(c):
    # c in (0, 0.5]; result >= 0.47
    w = -math.log(c * (2.0 - c))
    if w < 16.0:
        x = _giles(1.0 - c, w)
    else:
        # beyond the polynomial's single-precision range
        x = math.sqrt(w / 2.0)
        for _ in range(3):
            x = math.sqrt(-math.log(c * _SQRT_PI * x))
    # Newton on log(erfc(x)) - log(c), nearly linear in the tail
    log_c = math.log(c)
    for _ in range(3):
        lv = _log_erfc(x)
        x += (lv - log_c) / (_TWO_OVER_SQRT_PI * math.exp(-x * x - lv))
    return x


@numba.njit(cache=True)
def _erfinv_scalar(y):
    if math.isnan(y) or y < -1.0 or y > 1.0:
        return math.nan
    if y == 1.0:
        return math.inf
    if y == -1.0:
        return -math.inf
    if abs(y) <= 0.5:
        x = _giles(y, -math.log((1.0 - y) * (1.0 + y)))
        for _ in range(2):
            x -= (math.erf(x) - y) / (_TWO_OVER_SQRT_PI * math.exp(-x * x))
        return x
    r = _erfcinv_small(1.0 - abs(y))
    return r if y > 0 else -r


@numba.njit(cache=True)
def _erfcinv_scalar(c):
    if math.isnan(c) or c < 0.0 or c > 2.0:
        return math.nan
    if c == 0.0:
        return math.inf
    if c == 2.0:
        return -math.inf
    if c > 1.0:
        return -_erfcinv_scalar(2.0 - c)
    if c >= 0.5:
        return _erfinv_scalar(1.0 - c)
    return _erfcinv_small(c)


@numba.vectorize(["float64(float64)"], cache=True)
def erfinv(y):
    """Inverse of ``erf`` on [-1, 1]; NaN outside."""
    return _erfinv_scalar(y)


@numba.vectorize(["float64(float64)"], cache=True)
def erfcinv(c):
    """Inverse of ``erfc`` on [0, 2]; ``erfcinv(c) == erfinv(1 - c)`` without the cancellation."""
    return _erfcinv_scalar(c)


@numba.vectorize(["float64(float64)"], cache=True)
def erf(x):
    return math.erf(x)


@numba.vectorize(["float64(float64)"], cache=True)
def erfc(x):
    return math.erfc(x)
