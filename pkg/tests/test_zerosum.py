from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames.solvers import zerosum
from nlgames.solvers.zerosum import EmptyMatrix, solve_zero_sum

from oracles import minimax_by_vertices


def _transpose_neg(M):
    return [[-v for v in col] for col in zip(*M)]


@pytest.mark.parametrize(
    "M,value",
    [
        ([[1, -1], [-1, 1]], Fraction(0)),  # matching pennies
        ([[3]], Fraction(3)),
        ([[2, 1], [0, 5]], Fraction(5, 3)),
        ([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], Fraction(0)),  # rock paper scissors
        ([[1, 2], [3, 4]], Fraction(3)),  # saddle point
    ],
)
def test_known_values(M, value):
    sol = solve_zero_sum(M)
    assert sol.value == value
    assert sol.verify(M)


def test_fraction_entries():
    M = [[Fraction(1, 2), Fraction(-1, 3)], [Fraction(0), Fraction(1, 4)]]
    sol = solve_zero_sum(M)
    assert sol.verify(M)
    assert sol.value == Fraction(3, 26)


def test_empty_matrix():
    with pytest.raises((EmptyMatrix, ValueError)):
        solve_zero_sum(np.zeros((0, 3), dtype=int))


def test_duplicate_rows_keep_full_indexing():
    M = [[1, -1], [1, -1], [-1, 1]]
    sol = solve_zero_sum(M)
    assert len(sol.row_mix) == 3
    assert sol.verify(M)


small = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@given(small)
def test_certificate_and_oracle(M):
    sol = solve_zero_sum(M)
    assert sol.verify(M)
    # oracle minimises over columns, so feed it the negated transpose
    assert sol.value == -minimax_by_vertices(_transpose_neg(M))


@given(small)
def test_antisymmetry(M):
    assert solve_zero_sum(_transpose_neg(M)).value == -solve_zero_sum(M).value



@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_restricted_path_matches_direct(seed):
    M = np.where(np.random.default_rng(seed).integers(0, 2, size=(40, 12)) == 1, 1, -1).astype(np.int8)
    direct = solve_zero_sum(M)
    old = zerosum.DIRECT_CELLS
    zerosum.DIRECT_CELLS = 16
    try:
        restricted = solve_zero_sum(M)
    finally:
        zerosum.DIRECT_CELLS = old
    assert restricted.value == direct.value
    assert restricted.verify(M)


def test_fallback_when_vertex_recovery_fails(monkeypatch):
    M = np.where(np.random.default_rng(7).integers(0, 2, size=(64, 16)) == 1, 1, -1).astype(np.int8)
    expected = solve_zero_sum(M).value
    monkeypatch.setattr(zerosum, "DIRECT_CELLS", 16)
    monkeypatch.setattr(zerosum, "_recover_vertex", lambda *a: None)
    sol = solve_zero_sum(M)
    assert sol.value == expected
    assert sol.verify(M)
