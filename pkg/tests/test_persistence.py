from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anapt import (
    PersistenceDiagram,
    SeriesTooShort,
    NonFiniteSample,
    OracleSizeExceeded,
    extract_extrema,
    lifetimes,
    sublevel_persistence,
    sublevel_persistence_bruteforce,
)


def multiset(dgm):
    return sorted(zip(dgm.births.tolist(), dgm.deaths.tolist()))


def test_extrema_boundary_rule():
    got = [(e.index, e.height, e.kind) for e in extract_extrema([2, 0, 3, 1, 4]).entries]
    assert got == [(0, math.inf, "max"), (1, 0.0, "min"), (2, 3.0, "max"), (3, 1.0, "min"), (4, math.inf, "max")]


def test_extrema_monotone_has_only_sentinels():
    got = [(e.index, e.height, e.kind) for e in extract_extrema([1, 2, 3]).entries]
    assert got == [(0, -math.inf, "min"), (2, math.inf, "max")]


def test_extrema_constant_series():
    kinds = [e.kind for e in extract_extrema([1, 1, 1]).entries]
    assert kinds == ["min", "max"]


def test_extrema_plateau_collapses_to_first_index():
    ent = extract_extrema([3, 1, 1, 1, 4, 4, 0]).entries
    assert [(e.index, e.kind) for e in ent[1:-1]] == [(1, "min"), (4, "max")]


def test_extrema_alternate(rng):
    x = rng.integers(0, 5, 200).astype(float)
    kinds = [e.kind for e in extract_extrema(x).entries]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))


def test_small_example():
    dgm = sublevel_persistence([2, 0, 3, 1, 4])
    assert dgm.pairs == [(1.0, 3.0, 3, 2)]
    assert dgm.essential_birth == 0.0
    assert lifetimes(dgm).tolist() == [2.0]


def test_two_minima_two_maxima_with_descending_tail():
    v0, v1, p0, p1 = 0.0, 1.0, 3.0, 5.0
    x = [4.0, v1, p0, v0, p1, -2.0]
    dgm = sublevel_persistence(x)
    assert multiset(dgm) == sorted([(v1, p0), (v0, p1)])
    assert dgm.essential_birth == -math.inf
    assert sorted(lifetimes(dgm).tolist()) == sorted([p0 - v1, p1 - v0])


def test_empty_diagram_lifetimes():
    dgm = sublevel_persistence([1.0, 2.0])
    assert len(dgm) == 0
    assert lifetimes(dgm).size == 0


@pytest.mark.parametrize("x", [[1, 2, 3, 4], [4, 3, 2, 1], [1, 1, 2, 2, 3], [5, 5, 5]])
def test_monotone_series_have_no_finite_pairs(x):
    assert len(sublevel_persistence(x)) == 0
    assert len(sublevel_persistence_bruteforce(x)) == 0


def _random_series(rng, n):
    kind = rng.integers(3)
    if kind == 0:
        return rng.normal(size=n)
    if kind == 1:
        return rng.integers(0, 4, size=n).astype(float)  # ties and plateaus
    return np.repeat(rng.normal(size=n), rng.integers(1, 4, size=n))[:n]


def test_matches_oracle_on_random_series(rng):
    for _ in range(1000):
        x = _random_series(rng, int(rng.integers(2, 65)))
        fast, slow = sublevel_persistence(x), sublevel_persistence_bruteforce(x)
        assert multiset(fast) == multiset(slow), x
        assert fast.essential_birth == slow.essential_birth, x


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=40))
def test_matches_oracle_on_integer_series(xs):
    x = np.array(xs, dtype=float)
    fast, slow = sublevel_persistence(x), sublevel_persistence_bruteforce(x)
    assert multiset(fast) == multiset(slow)
    assert fast.essential_birth == slow.essential_birth


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=50), st.integers(-10**3, 10**3))
def test_shift_moves_pairs_and_keeps_lifetimes(xs, c):
    # integer data keeps the shift exact
    x = np.array(xs, dtype=float)
    a, b = sublevel_persistence(x), sublevel_persistence(x + c)
    assert multiset(b) == [(p + c, q + c) for p, q in multiset(a)]
    np.testing.assert_array_equal(np.sort(a.lifetimes), np.sort(b.lifetimes))


def test_reversal_invariance(rng):
    for _ in range(200):
        x = _random_series(rng, int(rng.integers(2, 80)))
        assert multiset(sublevel_persistence(x)) == multiset(sublevel_persistence(x[::-1]))


def test_indices_point_at_the_pair_values(rng):
    x = rng.normal(size=500)
    dgm = sublevel_persistence(x)
    np.testing.assert_array_equal(x[dgm.birth_indices], dgm.births)
    np.testing.assert_array_equal(x[dgm.death_indices], dgm.deaths)


def test_pair_count_matches_extrema(rng):
    x = rng.normal(size=1000)
    ext = extract_extrema(x)
    # every finite min other than the essential one is paired
    finite_mins = int(np.sum(~ext.is_max & np.isfinite(ext.heights)))
    dgm = sublevel_persistence(x)
    assert len(dgm) == finite_mins - (1 if np.isfinite(dgm.essential_birth) else 0)


def test_gaussian_mean_lifetime():
    x = np.random.default_rng(7).normal(size=100_000)
    assert sublevel_persistence(x).lifetimes.mean() == pytest.approx(1.692, abs=0.01)


def test_stability_under_perturbation(rng):
    from anapt import bottleneck_distance

    x = rng.normal(size=300)
    eps = 1e-3 * rng.uniform(-1, 1, size=300)
    d = bottleneck_distance(sublevel_persistence(x), sublevel_persistence(x + eps))
    assert d <= np.max(np.abs(eps)) + 1e-12


def test_rejects_short_and_nonfinite():
    with pytest.raises(SeriesTooShort):
        sublevel_persistence([1.0])
    with pytest.raises(NonFiniteSample):
        sublevel_persistence([1.0, math.nan, 2.0])


def test_oracle_size_limit():
    with pytest.raises(OracleSizeExceeded):
        sublevel_persistence_bruteforce(np.zeros(10_001))


def test_diagram_validation():
    with pytest.raises(ValueError):
        PersistenceDiagram.from_pairs([(2.0, 1.0)])
    with pytest.raises(ValueError):
        PersistenceDiagram.from_pairs([(0.0, math.inf)])


def test_diagram_helpers():
    dgm = PersistenceDiagram.from_pairs([(2.0, 3.0, 4, 5), (0.0, 4.0, 1, 2)])
    s = dgm.sorted()
    assert s.births.tolist() == [0.0, 2.0]
    assert s.select(np.array([True, False])).pairs[0].lifetime == 4.0
    assert dgm.points.shape == (2, 2)
