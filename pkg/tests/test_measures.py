from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphadim import properties as prop
from alphadim.measures import (
    MarkovMeasure,
    UnsupportedPointError,
    bk_entropy_of_measure,
    cylinder_mass,
    integrated_bk_entropy,
    local_bk_entropy_empirical,
    local_bk_entropy_exact,
    sample_points,
    verify_frostman_bound,
)
from alphadim.potential import Potential
from alphadim.symbolic import IncidenceMatrix, SymbolicPoint
from alphadim.thermo import parry_measure

from conftest import E1, GOLDEN_LOG, LOG2


def test_validation(golden):
    with pytest.raises(ValueError):
        MarkovMeasure(np.array([[0.5, 0.6], [0.5, 0.5]]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        MarkovMeasure(np.array([[0.5, 0.5], [0.5, 0.5]]), np.array([0.9, 0.1]))
    with pytest.raises(ValueError):
        MarkovMeasure.bernoulli([0.5, 0.5], golden)


def test_arrays_are_read_only():
    mu = MarkovMeasure.bernoulli([0.3, 0.7])
    with pytest.raises(ValueError):
        mu.transition[0, 0] = 1.0


def test_cylinder_mass():
    mu = MarkovMeasure.bernoulli([0.25, 0.75])
    m = cylinder_mass(mu, [0, 1, 1])
    assert m.p == pytest.approx(0.25 * 0.75 ** 2) and m.supported
    pm = parry_measure(IncidenceMatrix.golden_mean())
    pm = MarkovMeasure(pm.transition, pm.stationary, IncidenceMatrix.golden_mean())
    assert cylinder_mass(pm, [1, 1]).p == 0.0 and not cylinder_mass(pm, [1, 1]).supported


def test_json_round_trip():
    mu = MarkovMeasure.bernoulli([0.2, 0.8])
    back = MarkovMeasure.from_json(mu.to_json())
    assert np.array_equal(back.transition, mu.transition)


def test_local_entropy_exact_values(full2):
    mu = MarkovMeasure.bernoulli([0.3, 0.7])
    one = Potential.constant(full2, 1.0)
    x = SymbolicPoint((1, 1, 0), (0, 1))
    want = 2 * (-math.log(0.3) - math.log(0.7)) / 2
    assert local_bk_entropy_exact(mu, x, 1.0, one) == pytest.approx(want, abs=1e-12)
    phi = Potential.from_symbol_values(full2, [1.0, 3.0])
    assert local_bk_entropy_exact(mu, x, 1.0, phi) == pytest.approx(want / 2, abs=1e-12)


def test_local_entropy_empirical_converges(full2):
    mu = MarkovMeasure.bernoulli([0.5, 0.5])
    one = Potential.constant(full2, 1.0)
    x = SymbolicPoint((0, 1), (1, 0, 0))
    assert local_bk_entropy_empirical(mu, x, 0.5, one, E1, 10_000) == pytest.approx(1.5 * LOG2, abs=0.01)


def test_unsupported_points(golden):
    pm = parry_measure(golden)
    one = Potential.constant(golden, 1.0)
    bad = SymbolicPoint((), (1,))
    with pytest.raises(UnsupportedPointError):
        local_bk_entropy_exact(pm, bad, 0.0, one)
    assert local_bk_entropy_empirical(pm, bad, 0.0, one, E1, 20) == math.inf


def test_integrated_entropy_is_reproducible(full2):
    mu = MarkovMeasure.bernoulli([0.25, 0.75])
    one = Potential.constant(full2, 1.0)
    a = integrated_bk_entropy(mu, 1.0, one, samples=30, seed=4, length=2000)
    b = integrated_bk_entropy(mu, 1.0, one, samples=30, seed=4, length=2000)
    assert a == b
    assert abs(a.mean - bk_entropy_of_measure(mu, 1.0, one)) <= 4 * a.stderr


def test_parry_measure_bk_entropy(golden):
    pm = parry_measure(golden)
    assert bk_entropy_of_measure(pm, 1.0, Potential.constant(golden, 1.0)) == pytest.approx(2 * GOLDEN_LOG)


def test_sampled_points_are_admissible(golden):
    pm = parry_measure(golden)
    for per in sample_points(pm, 5, seed=1, length=500):
        x = SymbolicPoint((), tuple(per.tolist()))
        assert x.is_admissible(golden)


def test_frostman_bound(full2):
    mu = MarkovMeasure.bernoulli([0.5, 0.5])
    one = Potential.constant(full2, 1.0)
    # mu(ball) = 2^{-L} <= e^{-s n} when s <= (1+alpha) log 2
    ok = verify_frostman_bound(mu, 0.9 * 2 * LOG2, 1.0, 1.0, one, E1, 5, 30, samples=5)
    assert ok.passed and ok.m0 == 5
    bad = verify_frostman_bound(mu, 1.2 * 2 * LOG2, 1.0, 1.0, one, E1, 5, 30, samples=5)
    assert not bad.passed


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_markov_normalization_and_invariance(p, q):
    mu = MarkovMeasure.from_transition([[1 - p, p], [q, 1 - q]], IncidenceMatrix.full(2))
    assert prop.normalization(mu, IncidenceMatrix.full(2), n_max=8).ok
    assert prop.shift_invariance(mu, IncidenceMatrix.full(2), n_max=5).ok
