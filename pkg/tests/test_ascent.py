import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames.game import Distribution, build_chsh, build_ee
from nlgames.quantum import spectral_upper_bound, xor_correlation_matrix
from nlgames.solvers.ascent import VectorStrategy, alternating_ascent, vector_value

matrices = st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1)).map(
    lambda t: np.random.default_rng(t[2]).uniform(-1, 1, size=(t[0], t[1])) / (t[0] * t[1])
)


def test_vector_strategy_validation():
    with pytest.raises(ValueError):
        VectorStrategy(np.ones((2, 2)), np.eye(2))
    with pytest.raises(ValueError):
        VectorStrategy(np.eye(2), np.eye(3))
    s = VectorStrategy(np.eye(2), np.eye(2))
    assert s.d == 2
    assert np.array_equal(s.correlations(), np.eye(2))


def test_chsh_reaches_tsirelson():
    G = xor_correlation_matrix(build_chsh(), Distribution.uniform((2, 2)))
    r = alternating_ascent(G, seed=0)
    assert abs(r.value - 1 / np.sqrt(2)) < 1e-8
    assert abs(vector_value(G, r.strategy) - r.value) < 1e-12


def test_zero_matrix_is_degenerate():
    r = alternating_ascent(np.zeros((2, 3)), seed=0)
    assert r.degenerate and r.value == 0.0


def test_bad_arguments():
    with pytest.raises(ValueError):
        alternating_ascent(np.zeros((0, 2)), seed=0)
    with pytest.raises(ValueError):
        alternating_ascent(np.ones((2, 2)), d=0, seed=0)


@settings(max_examples=30)
@given(matrices, st.integers(0, 1000))
def test_thread_count_does_not_change_result(G, seed):
    a = alternating_ascent(G, restarts=4, seed=seed, threads=1)
    b = alternating_ascent(G, restarts=4, seed=seed, threads=3)
    assert a.value == b.value
    assert np.array_equal(a.strategy.u, b.strategy.u)


@settings(max_examples=30)
@given(matrices, st.integers(0, 1000))
def test_value_between_classical_and_spectral(G, seed):
    r = alternating_ascent(G, restarts=3, seed=seed)
    upper = spectral_upper_bound(G)
    assert r.value <= upper + 1e-9
    # every +-1 strategy is a vector strategy, so the best deterministic value is a floor
    best = max(np.abs(G @ np.array(b)).sum() for b in itertools.product((1, -1), repeat=G.shape[1]))
    assert r.value >= best - 1e-6


def test_ee_uniform_lower_bound_is_attained():
    m = 4
    G = xor_correlation_matrix(build_ee(m), Distribution.uniform((m, m)))
    r = alternating_ascent(G, seed=1)
    assert r.value >= (m - 2) / m - 1e-6
