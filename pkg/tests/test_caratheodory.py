from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphadim import properties as prop
from alphadim.acceptance import random_tiny_problem
from alphadim.caratheodory import (
    BracketError,
    CoverProblem,
    HorizonError,
    bisect_crossing,
    bs_dimension,
    bs_dimension_report,
    critical_exponent,
    outer_measure,
    pressure_value,
    transfer_pressure,
    weighted_cover_min,
)
from alphadim.potential import Potential
from alphadim.symbolic import IncidenceMatrix

from conftest import E1, GOLDEN_LOG, LOG2


def test_problem_validation(full2):
    with pytest.raises(HorizonError):
        CoverProblem(full2, n_min=5, n_max=3)
    with pytest.raises(ValueError):
        CoverProblem(full2, potential=Potential.from_symbol_values(full2, [0.0, 1.0]))
    with pytest.raises(ValueError):
        CoverProblem(full2, mode="bogus")


def test_single_level_value(full2):
    # one level n: cover by all 2^L cylinders, weight e^{-s n} each
    p = CoverProblem(full2, s=0.3, alpha=0.0, n_min=4, n_max=4)
    ell = 4 + 1
    assert outer_measure(p).log_value == pytest.approx(ell * LOG2 - 0.3 * 4, abs=1e-12)


def test_compressed_matches_explicit(golden):
    phi = Potential.constant(golden, 1.5)
    p = CoverProblem(golden, s=0.4, alpha=0.5, n_min=2, n_max=7, potential=phi)
    a = outer_measure(p)
    b = outer_measure(p, force_explicit=True)
    assert a.metadata["method"] == "compressed" and b.metadata["method"] == "explicit"
    assert a.log_value == pytest.approx(b.log_value, abs=1e-9)
    assert a.cover_size == b.cover_size


def test_certificate_is_json(golden):
    cert = json.loads(outer_measure(CoverProblem(golden, s=0.5, n_min=1, n_max=3)).certificate())
    assert cert["cover_size"] == len(cert["cover"])


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_critical_exponent_full_shift(full2, alpha):
    crit = critical_exponent(CoverProblem(full2, alpha=alpha, n_min=20, n_max=40), tol=1e-8)
    assert crit == pytest.approx((1 + alpha) * LOG2, abs=0.02)


def test_bisect_crossing_errors():
    with pytest.raises(BracketError):
        bisect_crossing(lambda s: 1.0, (0.0, 1.0))
    assert bisect_crossing(lambda s: 0.5 - s, (0.0, 1.0), tol=1e-10) == pytest.approx(0.5, abs=1e-9)


def test_transfer_pressure_oracles(full2):
    h = Potential.from_symbol_values(full2, [0.0, 3.0])
    assert transfer_pressure(full2, 0.0, h) == pytest.approx(math.log(1 + math.e ** 3), abs=1e-12)
    assert transfer_pressure(full2, 1.0, h) == pytest.approx(2 * math.log(1 + math.e ** 1.5), abs=1e-12)
    assert transfer_pressure(full2, 1.0, Potential.constant(full2, 0.0)) == pytest.approx(2 * LOG2)


def test_cover_pressure_constant(golden):
    c = Potential.constant(golden, -0.5)
    p = pressure_value(golden, 0.5, c, n_min=20, n_max=40)
    assert p == pytest.approx(1.5 * GOLDEN_LOG - 0.5, abs=0.02)


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_bowen_root_constant(golden, c):
    phi = Potential.constant(golden, c)
    assert bs_dimension(golden, 1.0, phi, method="transfer", tol=1e-10) == pytest.approx(2 * GOLDEN_LOG / c, abs=1e-6)
    rep = bs_dimension_report(golden, 1.0, phi, method="cover")
    assert rep.root == pytest.approx(2 * GOLDEN_LOG / c, abs=0.05)
    assert np.all(np.diff(rep.grid_pressure) < 0)


def test_bowen_root_rejects_nonpositive(full2):
    with pytest.raises(ValueError):
        bs_dimension(full2, 0.0, Potential.from_symbol_values(full2, [-1.0, 1.0]))


def test_weighted_cover_tiny(full2):
    res = weighted_cover_min(full2, 0.4, n_min=1, n_max=3, potential=Potential.constant(full2, 1.0))
    assert res.value == res.dp_value


def test_dp_matches_exhaustive_golden_hausdorff(golden):
    assert prop.dp_matches_exhaustive(CoverProblem(golden, s=GOLDEN_LOG, mode="hausdorff", n_min=1, n_max=6)).ok


def test_union_and_monotonicity(full2, golden):
    assert prop.monotone_in_s(CoverProblem(golden, alpha=0.5, n_min=5, n_max=12), np.linspace(0, 2, 9)).ok
    assert prop.monotone_in_nmin(CoverProblem(golden, s=0.5, alpha=0.5, n_max=12)).ok
    assert prop.union_properties(IncidenceMatrix.full(3), [(0, 0)], [(1, 2), (2, 1)]).ok


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_lp_equals_dp(seed):
    kw = random_tiny_problem(np.random.default_rng(seed), max_depth=4)
    res = weighted_cover_min(**kw)
    assert res.value == res.dp_value


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_dp_matches_brute_force(seed):
    kw = random_tiny_problem(np.random.default_rng(seed), max_depth=5)
    a = kw.pop("a")
    assert prop.dp_matches_exhaustive(CoverProblem(a, **kw)).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_weight_conventions_sandwich(seed):
    rng = np.random.default_rng(seed)
    a = (IncidenceMatrix.full(2), IncidenceMatrix.golden_mean())[seed % 2]
    phi = Potential.random(a, int(rng.integers(1, 4)), 1.0, 1.3, rng)
    n_max = int(rng.integers(3, 6))
    p = CoverProblem(a, None, float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.4, 0.9)),
                     float(rng.choice([0.0, 0.5, 1.0])), int(rng.integers(1, n_max + 1)), n_max, phi)
    assert prop.weight_convention(p).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_pressure_lipschitz_in_potential(seed):
    rng = np.random.default_rng(seed)
    a = (IncidenceMatrix.full(2), IncidenceMatrix.golden_mean())[seed % 2]
    h1, h2 = Potential.random(a, 1, -1.0, 1.0, rng), Potential.random(a, 2, -1.0, 1.0, rng)
    assert abs(transfer_pressure(a, 0.5, h1) - transfer_pressure(a, 0.5, h2)) <= h1.sup_distance(h2) + 1e-12
