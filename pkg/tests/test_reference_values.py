"""Reference values from closed forms and brute-force oracles, frozen here."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from alphadim.caratheodory import CoverProblem, bs_dimension, outer_measure, pressure_value, weighted_cover_min
from alphadim.estimators import (
    alpha_entropy_estimate,
    double_limit_experiment,
    greedy_spanning,
    make_system,
    neutralized_entropy_estimate,
    ratio_probe,
)
from alphadim.geometry import BallSpec, alpha_distance, alpha_entropy_sft, cylinder_length, spanning_number_sft
from alphadim.measures import (
    MarkovMeasure,
    cylinder_mass,
    integrated_bk_entropy,
    local_bk_entropy_empirical,
    local_bk_entropy_exact,
    verify_frostman_bound,
)
from alphadim.potential import Potential
from alphadim.symbolic import IncidenceMatrix, SymbolicPoint, count_words, higher_block_matrix, spectral_radius
from alphadim.thermo import (
    classical_pressure,
    divergence_set_entropy,
    generic_points_entropy,
    level_set_entropy,
    parry_measure,
)

from conftest import E1, GOLDEN_LOG, LOG2

PHI = (1 + math.sqrt(5)) / 2
M12 = 1 << 12


def test_golden_radius_is_quadratic_root(golden):
    assert spectral_radius(golden) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)


def test_small_counts(golden):
    assert [count_words(golden, n) for n in (1, 2, 3)] == [2, 3, 5]
    assert count_words(IncidenceMatrix.from_array([[1, 0], [0, 1]]), 4) == 2


def test_forbidden_11_gives_golden_ratio(full2):
    assert spectral_radius(higher_block_matrix(full2, [(1, 1)])) == pytest.approx(PHI, abs=1e-12)


def test_distance_example(full2):
    x = SymbolicPoint((), (0,))
    y = SymbolicPoint((0, 0, 0, 0, 0, 1), (0,))
    assert alpha_distance(full2, x, y, 4, 1.0) == pytest.approx(math.e, rel=1e-12)


def test_ball_lengths():
    assert cylinder_length(5, 0.0, E1) == 6
    assert cylinder_length(5, 1.0, E1) == 10
    for n in (1, 7, 40):
        assert cylinder_length(n, 0.0, 1 - 1e-6) == n


def test_spanning_numbers(full2, golden):
    assert spanning_number_sft(full2, BallSpec(50, 1.0, E1)) == pytest.approx(100 * LOG2, rel=1e-12)
    assert spanning_number_sft(golden, BallSpec(10, 0.0, E1)) == pytest.approx(math.log(233), rel=1e-12)
    assert alpha_entropy_sft(full2, 1.0, E1, (50, 50)).limit == pytest.approx(2 * LOG2, rel=1e-12)
    assert abs(alpha_entropy_sft(golden, 0.5, E1, (1, 200)).limit - 1.5 * GOLDEN_LOG) <= 0.02


def test_single_scale_cover_is_one(full2):
    for n in (3, 8):
        p = CoverProblem(full2, s=LOG2, eps=0.999, n_min=n, n_max=n)
        assert outer_measure(p).log_value == pytest.approx(0.0, abs=1e-12)


def test_golden_hausdorff_plateau(golden):
    v = outer_measure(CoverProblem(golden, s=GOLDEN_LOG, mode="hausdorff", n_min=6, n_max=10)).value
    assert 0.5 <= v <= 2.0


def test_uniform_single_scale_lp(full2):
    res = weighted_cover_min(full2, 0.5, eps=0.999, n_min=3, n_max=3, potential=Potential.constant(full2, 1.0))
    assert res.value == 8 * Fraction(math.exp(-1.5))


def test_bowen_roots(full2, golden):
    assert bs_dimension(full2, 0.0, Potential.constant(full2, 2.0), method="transfer", tol=1e-10) == pytest.approx(LOG2 / 2, abs=1e-8)
    assert bs_dimension(full2, 1.0, Potential.constant(full2, 1.0), method="transfer", tol=1e-10) == pytest.approx(2 * LOG2, abs=1e-8)
    assert bs_dimension(golden, 0.5, Potential.constant(golden, 1.0), method="transfer", tol=1e-10) == pytest.approx(1.5 * GOLDEN_LOG, abs=1e-8)


def test_pressure_of_constants(golden):
    h0 = pressure_value(golden, 0.5, Potential.constant(golden, 0.0), n_min=20, n_max=40)
    hc = pressure_value(golden, 0.5, Potential.constant(golden, 0.7), n_min=20, n_max=40)
    ent = 1.5 * GOLDEN_LOG
    assert abs(h0 - ent) <= 0.02
    assert hc - h0 == pytest.approx(0.7, abs=1e-6)
    assert abs(hc - (ent + 0.7)) <= 0.02


def test_classical_pressure_closed_form(full2):
    g = Potential.from_symbol_values(full2, [0.0, 1.0])
    for t in (-2.0, 0.0, 0.5, 3.0):
        assert classical_pressure(full2, g, t) == pytest.approx(math.log(1 + math.exp(t)), abs=1e-12)


def test_parry_entropy(golden):
    assert parry_measure(golden).entropy == pytest.approx(GOLDEN_LOG, abs=1e-12)


def test_level_set_at_half(full2):
    g = Potential.from_symbol_values(full2, [0.0, 1.0])
    assert level_set_entropy(full2, g, 0.5).entropy == pytest.approx(LOG2, abs=1e-9)
    assert level_set_entropy(full2, g, 0.5, alpha=1.0).alpha_scaled == pytest.approx(2 * LOG2, abs=2e-9)


def test_divergence_and_generic_values(full2):
    g = Potential.from_symbol_values(full2, [0.0, 1.0])
    assert divergence_set_entropy(full2, 0.0, g) == pytest.approx(LOG2)
    assert divergence_set_entropy(full2, 2.0, g) == pytest.approx(3 * LOG2)
    mu = MarkovMeasure.bernoulli([1 / 3, 2 / 3])
    assert generic_points_entropy(mu, 1.0) == pytest.approx(2 * (math.log(3) - 2 / 3 * LOG2), abs=1e-12)


def test_cylinder_mass_product():
    assert cylinder_mass(MarkovMeasure.bernoulli([1 / 3, 2 / 3]), [0, 1]).p == pytest.approx(2 / 9, rel=1e-12)


def test_local_entropy_values(full2, golden):
    one = Potential.constant(full2, 1.0)
    fair = MarkovMeasure.bernoulli([0.5, 0.5])
    assert local_bk_entropy_exact(fair, SymbolicPoint((1,), (0, 1, 1)), 0.5, one) == pytest.approx(1.5 * LOG2, abs=1e-12)
    assert local_bk_entropy_empirical(fair, SymbolicPoint((), (1, 0)), 1.0, one, E1, 50) == pytest.approx(2 * LOG2, abs=1e-12)
    p = 0.3
    x = SymbolicPoint((), (0, 1))
    mu = MarkovMeasure.bernoulli([p, 1 - p])
    want = -(math.log(p) + math.log(1 - p)) / 2
    assert local_bk_entropy_exact(mu, x, 0.0, one) == pytest.approx(want, abs=1e-12)
    assert local_bk_entropy_empirical(mu, x, 0.0, one, E1, 10_000) == pytest.approx(want, abs=1e-3)
    pm = parry_measure(golden)
    gone = Potential.constant(golden, 1.0)
    y = SymbolicPoint((0, 1), (0, 0, 1, 0, 1))
    assert abs(local_bk_entropy_empirical(pm, y, 0.0, gone, E1, 10_000) - local_bk_entropy_exact(pm, y, 0.0, gone)) <= 0.02


def test_monte_carlo_integrals(full2, golden):
    q = MarkovMeasure.bernoulli([0.25, 0.75])
    h = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    est = integrated_bk_entropy(q, 1.0, Potential.constant(full2, 1.0), samples=100, seed=1)
    assert abs(est.mean - 2 * h) <= 2 * est.stderr
    est = integrated_bk_entropy(parry_measure(golden), 0.5, Potential.constant(golden, 1.0), samples=100, seed=1)
    assert abs(est.mean - 1.5 * GOLDEN_LOG) <= 2 * est.stderr


def test_frostman_threshold(full2):
    fair = MarkovMeasure.bernoulli([0.5, 0.5])
    one = Potential.constant(full2, 1.0)
    for alpha in (0.0, 1.0):
        good = verify_frostman_bound(fair, 0.9 * (1 + alpha) * LOG2, 1.0, alpha, one, E1, 2, 60)
        assert good.passed and good.m0 is not None
        bad = verify_frostman_bound(fair, 1.1 * (1 + alpha) * LOG2, 1.0, alpha, one, E1, 2, 60)
        assert not bad.passed


def test_doubling_spanning_growth():
    sysm = make_system("doubling", M12)
    sizes = [greedy_spanning(sysm, n, 0.0, 0.1, 0, M12).size for n in range(4, 9)]
    slope = np.polyfit(np.arange(4, 9), np.log(sizes), 1)[0]
    assert slope == pytest.approx(LOG2, abs=0.1)


def test_rotation_spanning_bounded():
    sysm = make_system("rotation", M12)
    sizes = [greedy_spanning(sysm, n, 0.0, 0.1, 0, M12).size for n in (1, 5, 10, 14)]
    assert max(sizes) - min(sizes) <= 1


def test_classical_doubling_estimate():
    est = alpha_entropy_estimate(make_system("doubling", M12), 0.0, 0.2, (1, 14), M12)
    assert est.slope == pytest.approx(LOG2, abs=0.1)


def test_neutralized_values(full2):
    assert neutralized_entropy_estimate(full2, 0.25).slope == pytest.approx(1.25 * LOG2, abs=0.01)
    est = neutralized_entropy_estimate(make_system("doubling", 1 << 16), 0.25, (1, 14), 1 << 16)
    assert est.slope == pytest.approx(LOG2 + 0.25, abs=0.1)


def test_doubling_double_limit():
    d = double_limit_experiment(make_system("doubling", M12), (1.0, 0.5, 0.25), (0.3, 0.2, 0.1), n=14, m=M12)
    assert d.corner == pytest.approx(LOG2, abs=0.1)


def test_ratios(full2):
    rows = ratio_probe({"full2": full2, "doubling": make_system("doubling", 1 << 14)}, [1.0], m=1 << 14)
    assert rows[0].ratio == pytest.approx(2.0, abs=0.02)
    assert rows[1].ratio == pytest.approx(1 + 1 / LOG2, abs=0.2)
