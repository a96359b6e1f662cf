from __future__ import annotations

import mpmath
import numpy as np
import pytest

from anapt.special import erf, erfc, erfcinv, erfinv

mpmath.mp.dps = 40


@pytest.mark.parametrize("y", [-0.999999, -0.5, -1e-8, 0.0, 1e-12, 0.3, 0.9, 0.99999, 1 - 1e-12])
def test_erfinv_against_mpmath(y):
    want = float(mpmath.erfinv(mpmath.mpf(y)))
    assert float(erfinv(y)) == pytest.approx(want, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("c", [1e-300, 1e-100, 1e-20, 6.3e-9, 1e-5, 0.1, 0.5, 1.0, 1.7])
def test_erfcinv_against_mpmath(c):
    # solve erfc(x) = c directly; 1 - c is not representable for tiny c
    target = mpmath.mpf(c)
    want = float(mpmath.findroot(lambda x: mpmath.log(mpmath.erfc(x)) - mpmath.log(target), 1.0))
    assert float(erfcinv(c)) == pytest.approx(want, rel=1e-13, abs=1e-15)


def test_round_trip():
    y = np.linspace(-0.999, 0.999, 2001)
    np.testing.assert_allclose(erf(erfinv(y)), y, atol=2e-16 * 8)
    c = np.logspace(-250, 0, 500)
    x = erfcinv(c)
    # d log erfc / d log x ~ 2 x^2 amplifies the last-bit error in x
    rel = np.abs(erfc(x) / c - 1)
    assert np.all(rel <= 1e-15 * (4 + 2 * x**2))


def test_limits():
    assert erfinv(1.0) == np.inf
    assert erfinv(-1.0) == -np.inf
    assert erfcinv(0.0) == np.inf
    assert np.isnan(erfinv(1.5))
