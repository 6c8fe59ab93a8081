from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphadim.estimators import (
    DegenerateFitError,
    OrbitBudgetError,
    alpha_entropy_estimate,
    double_limit_experiment,
    extrapolate_to_zero,
    greedy_spanning,
    make_system,
    neutralized_entropy_estimate,
    neutralized_gap,
    neutralized_length,
    ratio_probe,
)
from alphadim.symbolic import IncidenceMatrix

from conftest import E1, GOLDEN_LOG, LOG2

M = 1 << 12


def test_make_system_errors():
    with pytest.raises(ValueError):
        make_system("nope")
    with pytest.raises(ValueError):
        make_system("shift", 1000)
    with pytest.raises(ValueError):
        make_system("logistic:5")


def test_logistic_stays_in_interval():
    sysm = make_system("logistic:3.9")
    orb = sysm.orbits(sysm.grid(M), 20)
    assert orb.min() >= 0 and orb.max() <= 1


def test_orbit_budget():
    sysm = make_system("doubling")
    with pytest.raises(OrbitBudgetError):
        sysm.orbits(sysm.grid(1 << 20), 100)


def test_degenerate_fit():
    with pytest.raises(DegenerateFitError):
        alpha_entropy_estimate(make_system("doubling", 256), 1.0, 0.2, (1, 14), 256)


def test_spanning_centers_are_separated():
    sysm = make_system("tent")
    grid = sysm.grid(M)
    ss = greedy_spanning(sysm, 3, 0.5, 0.1, seed=2, m=M)
    orb = sysm.orbits(grid, 3)
    pts = orb[:, ss.centers]
    scale = np.exp(0.5 * np.arange(3))[:, None]
    for j in range(ss.size):
        d = np.max(np.abs(pts - pts[:, [j]]) * scale, axis=0)
        d[j] = np.inf
        assert d.min() >= 0.1 * (1 - 1e-9)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_binary_shift_matches_exact_count(alpha):
    est = alpha_entropy_estimate(make_system("shift", M), alpha, E1, (1, 14), M)
    assert est.slope == pytest.approx((1 + alpha) * LOG2, abs=1e-9)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_rotation_slope_is_alpha(alpha):
    est = alpha_entropy_estimate(make_system("rotation", M), alpha, 0.2, (1, 14), M)
    assert est.slope == pytest.approx(alpha, abs=0.06)


def test_doubling_slope():
    est = alpha_entropy_estimate(make_system("doubling", M), 0.5, 0.2, (1, 14), M, seed=3)
    assert est.slope == pytest.approx(LOG2 + 0.5, abs=0.15)


def test_estimates_are_deterministic():
    a = alpha_entropy_estimate(make_system("tent", M), 0.5, 0.2, (1, 10), M, seed=9)
    b = alpha_entropy_estimate(make_system("tent", M), 0.5, 0.2, (1, 10), M, seed=9)
    assert np.array_equal(a.log_sizes, b.log_sizes) and a.slope == b.slope


def test_neutralized_values():
    assert neutralized_length(10, 0.5) == 15
    full2 = IncidenceMatrix.full(2)
    est = neutralized_entropy_estimate(full2, 0.25)
    assert est.slope == pytest.approx(1.25 * LOG2, abs=0.01)
    gap = neutralized_gap(full2)
    assert gap.neutralized == pytest.approx(LOG2, abs=0.05)
    assert gap.gap >= 0.9 * LOG2


def test_extrapolate_to_zero():
    assert extrapolate_to_zero([1.0, 2.0, 3.0], [3.0, 5.0, 7.0]) == pytest.approx(1.0)
    assert extrapolate_to_zero([0.5], [2.0]) == 2.0


def test_double_limit_golden():
    d = double_limit_experiment(IncidenceMatrix.golden_mean(), (1.0, 0.5, 0.25), (E1, math.exp(-2)), n=200)
    assert d.corner == pytest.approx(GOLDEN_LOG, abs=0.05)
    assert d.ordering_ok


def test_ratio_probe_sft():
    rows = ratio_probe({"full2": IncidenceMatrix.full(2)}, [0.0, 1.0])
    assert [r.ratio for r in rows] == pytest.approx([1.0, 2.0], abs=0.02)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 6), st.sampled_from([0.0, 0.5, 1.0]), st.integers(0, 100))
def test_greedy_monotone_in_n(n, alpha, seed):
    sysm = make_system("doubling", 1 << 10)
    a = greedy_spanning(sysm, n, alpha, 0.2, seed, 1 << 10).size
    b = greedy_spanning(sysm, n + 1, alpha, 0.2, seed, 1 << 10).size
    assert a <= b


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.integers(0, 100))
def test_greedy_monotone_in_alpha(n, a1, a2, seed):
    lo, hi = sorted((a1, a2))
    sysm = make_system("doubling", 1 << 10)
    assert greedy_spanning(sysm, n, lo, 0.2, seed, 1 << 10).size <= greedy_spanning(sysm, n, hi, 0.2, seed, 1 << 10).size
