from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphadim import properties as prop
from alphadim.symbolic import (
    EmptySubshiftError,
    IncidenceMatrix,
    SymbolicPoint,
    block_presentation,
    count_words,
    enumerate_words,
    higher_block_matrix,
    log_word_counts,
    perron_root,
    spectral_radius,
)

from conftest import GOLDEN_LOG


def fib(n):
    a, b = 1, 2
    for _ in range(n - 1):
        a, b = b, a + b
    return b


def test_golden_counts_are_fibonacci(golden):
    for n in range(1, 40):
        assert count_words(golden, n) == fib(n)


def test_full_shift_counts(full2):
    assert count_words(IncidenceMatrix.full(3), 7) == 3 ** 7
    assert count_words(full2, 500, log=True) == pytest.approx(500 * math.log(2), rel=1e-12)


def test_log_counts_match_exact(golden):
    logs = log_word_counts(golden, 60)
    assert np.allclose(logs, [math.log(fib(n)) for n in range(1, 61)], rtol=0, atol=1e-10)


def test_spectral_radius_oracles(golden):
    assert math.log(spectral_radius(golden)) == pytest.approx(GOLDEN_LOG, abs=1e-12)
    assert spectral_radius(IncidenceMatrix.full(5)) == pytest.approx(5.0, abs=1e-12)
    # reducible: a 2-shift block feeding a fixed point
    red = IncidenceMatrix.from_array([[1, 1, 1], [1, 1, 0], [0, 0, 1]])
    assert spectral_radius(red) == pytest.approx(2.0, abs=1e-12)
    assert perron_root(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(3.0, abs=1e-12)


def test_enumerate_words(golden):
    words = enumerate_words(golden, 4)
    assert len(words) == 8 and all(golden.is_admissible(w) for w in words)
    assert (1, 1) not in enumerate_words(golden, 2)


def test_matrix_validation():
    with pytest.raises(ValueError):
        IncidenceMatrix.from_array([[1, 2], [1, 0]])
    with pytest.raises(ValueError):
        IncidenceMatrix.from_array([[1, 1, 1], [1, 0, 1]])
    with pytest.raises(ValueError):
        IncidenceMatrix.from_array([[0, 1], [0, 0]])
    with pytest.raises(EmptySubshiftError):
        higher_block_matrix(IncidenceMatrix.full(2), [(0, 0), (0, 1), (1, 1), (1, 0)])


def test_json_round_trip(golden):
    assert IncidenceMatrix.from_json(golden.to_json()) == golden


def test_symbolic_point_basics():
    x = SymbolicPoint((1, 0), (0, 1, 0, 1))
    assert x.period == (0, 1)
    assert list(x.prefix(7)) == [1, 0, 0, 1, 0, 1, 0]
    assert x.shift(2) == SymbolicPoint((), (0, 1))
    assert x[100] == x.prefix(101)[-1]


def test_block_presentation_counts_golden(full2):
    sub = higher_block_matrix(full2, [(1, 1)])
    assert math.log(spectral_radius(sub)) == pytest.approx(GOLDEN_LOG, abs=1e-12)
    sub = block_presentation(full2, 2, [(1, 1, 1)])
    assert spectral_radius(sub) ** 3 == pytest.approx(spectral_radius(sub) ** 2 + spectral_radius(sub) + 1, abs=1e-9)
    sub = block_presentation(full2, 1, [(1, 1)])
    assert math.log(spectral_radius(sub)) == pytest.approx(GOLDEN_LOG, abs=1e-12)


def test_reference_properties(full2, golden):
    for a in (full2, golden):
        assert prop.submultiplicativity(a).ok
        assert prop.count_convergence(a).ok


@st.composite
def matrices(draw, max_k=4):
    k = draw(st.integers(2, max_k))
    bits = draw(st.lists(st.integers(0, 1), min_size=k * k, max_size=k * k))
    arr = np.array(bits).reshape(k, k)
    arr[np.arange(k), (np.arange(k) + 1) % k] = 1   # a k-cycle keeps the shift nonempty
    return IncidenceMatrix.from_array(arr)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_counts_match_brute_force(a):
    for n in range(1, 7):
        assert count_words(a, n) == prop.brute_force_count(a, n)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.integers(1, 12), st.integers(1, 12))
def test_counts_submultiplicative(a, m, n):
    assert count_words(a, m + n) <= count_words(a, m) * count_words(a, n)


@settings(max_examples=30, deadline=None)
@given(matrices())
def test_growth_rate_approaches_log_radius(a):
    assert count_words(a, 400, log=True) / 400 == pytest.approx(math.log(spectral_radius(a)), abs=a.k / 400 + 0.01)
