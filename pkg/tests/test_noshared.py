import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames import classical as cl
from nlgames import noshared as ns
from nlgames.game import DeterministicStrategy, Game, GameError, build_chsh, build_ee, build_or_and, builtin


def _planted_xor(rng, nx, ny):
    """Parity table that a hidden deterministic strategy wins everywhere."""
    a = rng.integers(0, 2, size=nx)
    b = rng.integers(0, 2, size=ny)
    return Game.from_parity(a[:, None] ^ b[None, :])


def test_product_strategy_validation():
    with pytest.raises(GameError):
        ns.ProductStrategy(((0.5, 1.2), (0.0, 0.0)))
    with pytest.raises(GameError):
        ns.ProductStrategy(((math.nan,),))
    s = ns.ProductStrategy(((0, 1), (1, 1)))
    assert s.is_deterministic() and s.input_sizes == (2, 2)


def test_product_value_shape_check():
    with pytest.raises(GameError):
        ns.product_value(build_chsh(), ns.ProductStrategy(((0.5,), (0.5,))), (0, 0))


def test_constant_win_gives_one():
    g = Game((2, 2), np.ones((2, 2, 2, 2), dtype=np.int8))
    value, _ = ns.product_worst(g, grid=20)
    assert value == pytest.approx(1.0, abs=1e-12)


def test_ee2_has_perfect_strategy():
    r = ns.xor_dichotomy(build_ee(2))
    assert isinstance(r, ns.PerfectDeterministic)
    s = r.strategy
    g = build_ee(2)
    assert all(g.value(x, s.respond(x)) == 1 for x in g.inputs())


def test_chsh_odd_cycle_witness():
    r = ns.xor_dichotomy(build_chsh())
    assert isinstance(r, ns.AtMostHalf)
    need = {(x, y): x & y for x in range(2) for y in range(2)}
    # parities around the cycle sum to 1, so no assignment satisfies every edge
    assert sum(need[e] for e in r.cycle) % 2 == 1
    assert len(set(r.cycle)) == len(r.cycle)


def test_dichotomy_needs_xor():
    with pytest.raises(GameError):
        ns.xor_dichotomy(build_or_and())


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
def test_planted_games_are_perfect(seed, nx, ny):
    g = _planted_xor(np.random.default_rng(seed), nx, ny)
    r = ns.xor_dichotomy(g)
    assert isinstance(r, ns.PerfectDeterministic)
    assert all(g.value(x, r.strategy.respond(x)) == 1 for x in g.inputs())


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 4))
def test_odd_cycles_are_real(seed, nx, ny):
    rng = np.random.default_rng(seed)
    parity = rng.integers(0, 2, size=(nx, ny))
    g = Game.from_parity(parity)
    r = ns.xor_dichotomy(g)
    if isinstance(r, ns.AtMostHalf):
        assert sum(int(g.value(e, (0, 0)) == -1) for e in r.cycle) % 2 == 1
        assert cl.classical_worst(g).value < 1


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 4))
def test_rounding_never_hurts_above_half(seed, nx, ny):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=nx)
    b = rng.integers(0, 2, size=ny)
    parity = a[:, None] ^ b[None, :]
    parity[rng.random(parity.shape) < 0.2] ^= 1
    g = Game.from_parity(parity)
    # noisy copy of the planted answers, never exactly 1/2
    q = [np.abs(bits - rng.uniform(0.0, 0.49, size=bits.size)) for bits in (a, b)]
    s = ns.ProductStrategy(tuple(tuple(float(v) for v in row) for row in q))
    before = ns.product_min_value(g, s)
    if before > 0:
        rounded = ns.ProductStrategy.from_deterministic(ns.round_product(s))
        assert ns.product_min_value(g, rounded) >= before - 1e-12


@pytest.mark.parametrize("gid", ["chsh", "orand"])
def test_no_shared_at_most_shared(gid):
    g = builtin(gid)
    value, s = ns.product_worst(g)
    assert value <= float(cl.classical_worst(g).value) + 1e-12
    assert ns.product_min_value(g, s) == pytest.approx(value, abs=1e-12)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_no_shared_at_most_shared_random(seed):
    table = np.where(np.random.default_rng(seed).integers(0, 2, size=(2, 2, 2, 2)) == 1, 1, -1)
    g = Game((2, 2), table)
    value, s = ns.product_worst(g, grid=40, refine_iters=2)
    assert value <= float(cl.classical_worst(g).value) + 1e-9


def test_or_and_stationarity():
    r = ns.product_worst(build_or_and())
    p = r.strategy.q[0][0]
    assert abs(1 - p * p - p) <= 1e-9
    assert r.exact_text == "sqrt(5) - 2"
    assert r.value == pytest.approx(math.sqrt(5) - 2, abs=1e-12)


def test_product_worst_shape_limits():
    with pytest.raises(GameError):
        ns.product_worst(builtin("ee", 3))
    with pytest.raises(GameError):
        ns.product_worst(builtin("nand", 3))


@settings(max_examples=20)
@given(st.integers(0, 15), st.integers(0, 3))
def test_deterministic_product_matches_exact_payoff(code, xi):
    g = build_chsh()
    det = DeterministicStrategy.decode(code, (2, 2))
    x = list(g.inputs())[xi]
    assert ns.product_value(g, ns.ProductStrategy.from_deterministic(det), x) == g.value(x, det.respond(x))
