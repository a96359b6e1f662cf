from __future__ import annotations

import math
import warnings

import mpmath
import numpy as np
import pytest

from anapt import (
    DEFAULT_TABLES,
    CompensationConstants,
    DomainError,
    EmptyDiagram,
    Gaussian,
    PersistenceDiagram,
    ReliabilityWarning,
    anapt,
    compensation_factor,
    cutoff,
    cutoff_from_median,
    estimate_delta,
    estimate_parameter,
    median_lifetime,
    sample,
    sublevel_persistence,
)
from anapt.noise import make_model, mean_lifetime
from anapt.signals import SignalSpec, generate

GAUSS = DEFAULT_TABLES.constants("gaussian")


def test_median_lifetime():
    assert median_lifetime([1.0, 2.0, 3.0]) == 2.0
    assert median_lifetime([1.0, 2.0, 3.0, 100.0]) == 2.5
    with pytest.raises(EmptyDiagram):
        median_lifetime([])


def test_estimate_parameter_examples():
    assert estimate_parameter("gaussian", 1.0) == pytest.approx(0.680, rel=0.005)
    assert estimate_parameter("uniform", 0.25) == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("family", ["gaussian", "uniform", "rayleigh", "exponential"])
def test_estimate_parameter_inverts_mean_lifetime(family):
    rho = DEFAULT_TABLES.rho_for(family)
    param = estimate_parameter(family, 0.8)
    assert mean_lifetime(make_model(family, param)) == pytest.approx(rho * 0.8, rel=1e-9)


def test_gaussian_cutoff_from_median_matches_printed_composite():
    alpha, n = 0.001, 100_000
    q = (1 - mpmath.sqrt(alpha)) ** (mpmath.mpf(1) / n)
    printed = float(1.923 * mpmath.erfinv(2 * q - 1))
    via_sigma = cutoff(Gaussian(0.680), alpha, n)
    assert cutoff_from_median("gaussian", 1.0, alpha, n) == pytest.approx(printed, rel=0.005)
    assert printed == pytest.approx(via_sigma, rel=0.005)
    assert printed == pytest.approx(6.78, rel=0.005)


def test_uniform_cutoff_from_median():
    assert cutoff_from_median("uniform", 0.5, 0.001, 100_000) == pytest.approx(0.99999936, abs=1e-8)


@pytest.mark.parametrize("family", ["gaussian", "uniform", "rayleigh", "exponential"])
def test_cutoff_from_median_is_linear(family):
    assert cutoff_from_median(family, 2.0) == pytest.approx(2.0 * cutoff_from_median(family, 1.0), rel=1e-12)


def test_estimate_parameter_rejects_nonpositive_median():
    with pytest.raises(DomainError):
        estimate_parameter("gaussian", 0.0)


def test_estimate_delta():
    assert estimate_delta([1.0, 2.0], 3.0, 100) == 0.0
    assert estimate_delta([1.0, 5.0, 7.0], 3.0, 100) == pytest.approx(0.24)
    # strict inequality at the cutoff
    assert estimate_delta([3.0], 3.0, 10) == 0.0


def test_compensation_factor():
    assert compensation_factor(0.0, 1.0, GAUSS) == 1.0
    want = float(mpmath.exp(mpmath.mpf("0.845") * mpmath.mpf("0.5") ** mpmath.mpf("0.809")))
    assert compensation_factor(1.0, 1.0, GAUSS) == pytest.approx(want, rel=1e-14)
    assert want == pytest.approx(1.620, abs=5e-4)
    big = compensation_factor(1e12, 1.0, GAUSS)
    assert 1.0 < big <= math.exp(0.845)
    rs = [compensation_factor(d, 1.0, GAUSS) for d in np.linspace(0, 10, 50)]
    assert all(a < b for a, b in zip(rs, rs[1:]))


def test_compensation_factor_domain():
    with pytest.raises(DomainError):
        compensation_factor(-1.0, 1.0, GAUSS)
    with pytest.raises(DomainError):
        CompensationConstants(0.0, 1.0)


def test_pure_noise_report():
    x = sample(Gaussian(1.0), 20_000, 5)
    rep = anapt(x, "gaussian", 0.001)
    assert rep.n == 20_000
    assert rep.n_signal == 0 and rep.n_noise == rep.n_pairs
    assert rep.delta == 0.0 and rep.R == 1.0
    assert rep.compensated_cutoff == rep.raw_cutoff
    assert rep.raw_param == pytest.approx(1.0, rel=0.03)
    assert rep.reliable


def test_report_invariants():
    spec = SignalSpec("quasiperiodic", amplitude=10.0)
    x = generate(spec)
    x = x.with_values(x.values + sample(Gaussian(1.0), len(x), 3).values)
    rep = anapt(x)
    assert rep.compensated_cutoff == pytest.approx(rep.R * rep.raw_cutoff, rel=1e-12)
    assert rep.compensated_param == pytest.approx(rep.R * rep.raw_param, rel=1e-12)
    assert rep.n_signal + rep.n_noise == rep.n_pairs
    assert all(p.lifetime > rep.compensated_cutoff for p in rep.signal_pairs)
    assert all(p.lifetime <= rep.compensated_cutoff for p in rep.noise_pairs)
    d = rep.to_dict()
    assert d["signal_pairs"][0].keys() == {"birth", "death", "birth_index", "death_index"}


def test_exponential_compensation_scales_the_length_scale():
    x = sample(make_model("exponential", 1.0), 601, 2).values + 10 * np.sin(np.linspace(0, 15 * np.pi, 601))
    rep = anapt(x, "exponential")
    assert rep.R > 1
    assert 1 / rep.compensated_param == pytest.approx(rep.R / rep.raw_param, rel=1e-12)


@pytest.mark.parametrize("c", [0.01, 3.0, 250.0])
def test_scale_equivariance(c):
    x = generate(SignalSpec("quasiperiodic", amplitude=10.0)).values + sample(Gaussian(1.0), 601, 9).values
    a, b = anapt(x), anapt(c * x)
    for name in ("median_lifetime", "raw_param", "raw_cutoff", "delta", "compensated_param", "compensated_cutoff"):
        assert getattr(b, name) == pytest.approx(c * getattr(a, name), rel=1e-9), name
    assert b.R == pytest.approx(a.R, rel=1e-9)
    assert [p[2:] for p in a.signal_pairs] == [p[2:] for p in b.signal_pairs]


def test_accepts_a_diagram():
    x = sample(Gaussian(1.0), 5000, 1)
    dgm = sublevel_persistence(x)
    assert anapt(dgm).compensated_cutoff == anapt(x).compensated_cutoff


def test_reliability_warning_when_most_pairs_exceed_the_raw_cutoff():
    # the median is inside the top half, so this needs a cutoff below the median:
    # uniform noise, lenient alpha and a short record
    dgm = PersistenceDiagram.from_pairs([(0.0, 1.0), (0.0, 10.0), (0.0, 10.0)], n_samples=8)
    with pytest.warns(ReliabilityWarning):
        rep = anapt(dgm, "uniform", alpha=0.9)
    assert rep.raw_cutoff < rep.median_lifetime
    assert not rep.reliable


def test_no_warning_on_noise():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        anapt(sample(Gaussian(1.0), 2000, 1))


def test_custom_tables():
    tables = DEFAULT_TABLES.replace(rho={"gaussian": DEFAULT_TABLES.rho["gaussian"].__class__(2.0)})
    x = sample(Gaussian(1.0), 5000, 1)
    assert anapt(x, tables=tables).raw_param == pytest.approx(2.0 / 1.154 * anapt(x).raw_param, rel=1e-9)
