"""Acceptance criteria, one marker per criterion; the terminal summary
prints a PASS/FAIL line for each."""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from nlgames import classical as cl
from nlgames import noshared as ns
from nlgames import quantum as qu
from nlgames.game import (
    Distribution,
    Game,
    MixedStrategy,
    SymmetricDistribution,
    build_chsh,
    build_ee,
    build_ma,
    build_nand,
    build_or_and,
    input_values,
    symmetric_builtin_coeffs,
    symmetric_coeffs,
    value_of_mixed,
)
from nlgames.sim import exact_value, simulate
from nlgames.solvers import alternating_ascent, minimax_circle

from oracles import brute_payoff_matrix, minimax_by_vertices, random_game

SQRT_HALF = 1 / math.sqrt(2)

CLASSICAL = "Classical exact equalities"
CERTIFICATES = "Certificate cross-checks"
QUANTUM = "Quantum numerics"
LIMITS = "Limit lemmas"
NO_SHARED = "No-shared-randomness"
VALIDATORS = "Global validators"
ORACLE = "Oracle equivalence"


class timed:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.budget, f"took {self.elapsed:.1f}s, budget {self.budget}s"


def ee_closed(m):
    return Fraction(m, 3 * m - 4) if m % 2 == 0 else Fraction(m + 1, 3 * m - 1)


def nand_closed(n):
    return Fraction(2 ** (n - 2), 3 * 2 ** (n - 2) - 1)


# -- classical exact equalities ---------------------------------------------------------


@pytest.mark.acceptance(CLASSICAL)
def test_chsh_uniform_and_worst():
    with timed(10):
        assert cl.classical_fixed(build_chsh(), Distribution.uniform((2, 2))).value == Fraction(1, 2)
    with timed(10):
        assert cl.classical_worst(build_chsh()).value == Fraction(1, 2)


@pytest.mark.acceptance(CLASSICAL)
@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_ee_worst(m):
    with timed(10):
        r = cl.classical_worst(build_ee(m))
    assert r.value == ee_closed(m)


@pytest.mark.acceptance(CLASSICAL)
@pytest.mark.parametrize("m", [4, 5, 6])
def test_ee_uniform(m):
    with timed(10):
        r = cl.classical_fixed(build_ee(m), Distribution.uniform((m, m)))
    assert r.value == Fraction(m - 2, m)


@pytest.mark.acceptance(CLASSICAL)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_nand_worst(n):
    with timed(10):
        r = cl.classical_worst(build_nand(n))
    assert r.value == nand_closed(n)


@pytest.mark.acceptance(CLASSICAL)
@pytest.mark.parametrize("n", [2, 4])
def test_ma_worst_even(n):
    with timed(10):
        r = cl.classical_worst(build_ma(n))
    assert r.value == Fraction(1, 2 ** (n // 2))
    assert abs(float(r.value) - 2.0 ** (-n / 2)) <= 1e-12


# -- certificate cross-checks ------------------------------------------------------------------

CONSTRUCTIONS = (
    [("chsh", build_chsh(), cl.chsh_mix(), Distribution.uniform((2, 2)), Fraction(1, 2))]
    + [(f"ee{m}", build_ee(m), cl.ee_mix(m), cl.ee_worst_dist(m), ee_closed(m)) for m in range(3, 9)]
    + [(f"nand{n}", build_nand(n), cl.nand_mix(n), cl.nand_worst_dist(n), nand_closed(n)) for n in range(2, 7)]
)


@pytest.mark.acceptance(CERTIFICATES)
@pytest.mark.parametrize("name,game,mix,dist,value", CONSTRUCTIONS, ids=[c[0] for c in CONSTRUCTIONS])
def test_mix_achieves_value_on_every_point_mass(name, game, mix, dist, value):
    per_input = [value_of_mixed(game, mix, Distribution.point(x)) for x in game.inputs()]
    assert min(per_input) == value
    assert all(v >= value for v in per_input)


@pytest.mark.acceptance(CERTIFICATES)
@pytest.mark.parametrize("name,game,mix,dist,value", CONSTRUCTIONS, ids=[c[0] for c in CONSTRUCTIONS])
def test_worst_distribution_caps_every_deterministic_strategy(name, game, mix, dist, value):
    # enumeration returns the best deterministic strategy, which is the cap
    best = cl.classical_fixed(game, dist)
    assert best.value == value
    assert value_of_mixed(game, best.certificate_strategy, dist) == value


# -- quantum numerics -----------------------------------------------------------------------------


@pytest.mark.acceptance(QUANTUM)
def test_minimax_circle_chsh():
    with timed(60):
        r = minimax_circle((1, 1, -1))
    assert abs(r.value - SQRT_HALF) <= 1e-5


@pytest.mark.acceptance(QUANTUM)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ma_quantum_worst(n):
    with timed(60):
        r = qu.quantum_symmetric_worst(symmetric_coeffs(build_ma(n)))
    assert abs(r.upper - SQRT_HALF) <= 1e-5
    assert r.lower <= r.upper


@pytest.mark.acceptance(QUANTUM)
def test_ascent_chsh_uniform():
    G = qu.xor_correlation_matrix(build_chsh(), Distribution.uniform((2, 2)))
    with timed(60):
        r = alternating_ascent(G, seed=11)
    assert r.value >= SQRT_HALF - 1e-4


@pytest.mark.acceptance(QUANTUM)
@pytest.mark.parametrize("m", [4, 6])
def test_ee_uniform_quantum_bracket(m):
    with timed(60):
        r = qu.quantum_2xor_fixed(build_ee(m), Distribution.uniform((m, m)), seed=5)
    target = (m - 2) / m
    assert r.lower - 1e-3 <= target <= float(r.upper) + 1e-3


def _ee_alpha(m, beta):
    return (1 - m * (m - 1) * beta) / m


@pytest.mark.acceptance(QUANTUM)
@pytest.mark.parametrize("m", [4, 5, 6])
def test_ee_alphabeta_both_regimes(m):
    threshold = Fraction(2, m * (3 * m - 4))
    high = [threshold, Fraction(1, m * (m - 1)), (threshold + Fraction(1, m * (m - 1))) / 2]
    low = [Fraction(0), threshold / 3, threshold - Fraction(1, 10**4)]
    for beta in high:
        r = qu.ee_alphabeta_value(m, beta)
        assert r.lower == r.upper == 2 * beta * (m - 1) * m - 1
        # the classical value under this distribution is the same number
        dist = cl.ee_distribution(m, _ee_alpha(m, beta), beta)
        assert cl.classical_fixed(build_ee(m), dist).value == r.upper
    for beta in low:
        r = qu.ee_alphabeta_value(m, beta)
        assert r.upper == 1 - beta * (m - 2) * m
        if m % 2 == 0:
            assert r.lower == r.upper
        else:
            assert r.lower == 1 - beta * (m - 1) ** 2
        dist = cl.ee_distribution(m, _ee_alpha(m, beta), beta)
        assert r.lower <= cl.classical_fixed(build_ee(m), dist).value <= r.upper


# -- limit lemmas -------------------------------------------------------------------------------------


@pytest.mark.acceptance(LIMITS)
def test_nand_limit_distribution_trend():
    with timed(120):
        v = {}
        for n in (9, 25, 100):
            p = qu.nand_limit_distribution(n)
            v[n] = qu.quantum_symmetric_fixed(symmetric_builtin_coeffs("nand", n), p).upper
    assert min(v.values()) >= 1 / 3 - 1e-9
    assert v[100] < v[25] < v[9]


@pytest.mark.acceptance(LIMITS)
def test_nmaj_distribution_trend():
    with timed(120):
        g = {}
        for k in (2, 8, 32):
            p = qu.nmaj_distribution(k)
            g[k] = qu.quantum_symmetric_fixed(symmetric_builtin_coeffs("nmaj", 2 * k - 1), p).upper
    assert g[2] > g[8] > g[32]
    assert g[32] < g[2]


# -- no shared randomness ---------------------------------------------------------------------------------


@pytest.mark.acceptance(NO_SHARED)
def test_or_and_product_value():
    r = ns.product_worst(build_or_and())
    assert abs(r.value - (math.sqrt(5) - 2)) <= 1e-6
    p = (math.sqrt(5) - 1) / 2
    for row in r.strategy.q:
        assert abs(row[0] - p) <= 1e-6
        assert abs(row[1] - 1.0) <= 1e-6


@pytest.mark.acceptance(NO_SHARED)
def test_chsh_dichotomy():
    assert isinstance(ns.xor_dichotomy(build_chsh()), ns.AtMostHalf)


@pytest.mark.acceptance(NO_SHARED)
def test_two_colourable_game_has_verified_perfect_strategy():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2, size=4)
    b = rng.integers(0, 2, size=5)
    game = Game.from_parity(a[:, None] ^ b[None, :], "planted")
    verdict = ns.xor_dichotomy(game)
    assert isinstance(verdict, ns.PerfectDeterministic)
    assert set(input_values(game, MixedStrategy.pure(verdict.strategy)).values()) == {1}


# -- global validators ------------------------------------------------------------------------------------------


def _fixed_cases():
    yield "chsh", build_chsh(), Distribution.uniform((2, 2))
    for m in (3, 4, 5, 6):
        g = build_ee(m)
        yield f"ee{m} uniform", g, Distribution.uniform((m, m))
        yield f"ee{m} worst", g, cl.ee_worst_dist(m)
    for n in (2, 3, 4, 5):
        yield f"ma{n} uniform", build_ma(n), Distribution.uniform((2,) * n)
    for n in (2, 3, 4, 5, 6):
        yield f"nand{n} worst", build_nand(n), cl.nand_worst_dist(n)
        yield f"nand{n} uniform", build_nand(n), Distribution.uniform((2,) * n)


def _quantum_fixed(game, dist):
    if game.n_players == 2:
        return qu.quantum_2xor_fixed(game, dist, seed=1)
    p = SymmetricDistribution.from_distribution(dist, game.n_players)
    return qu.quantum_symmetric_fixed(symmetric_coeffs(game), p)


@pytest.mark.acceptance(VALIDATORS)
@pytest.mark.parametrize("name,game,dist", list(_fixed_cases()), ids=[c[0] for c in _fixed_cases()])
def test_fixed_distribution_validators(name, game, dist):
    c_fixed = cl.classical_fixed(game, dist).value
    q_fixed = _quantum_fixed(game, dist)
    c_worst = cl.classical_worst(game).value
    assert c_worst <= c_fixed
    assert float(q_fixed.upper) >= float(c_fixed) - 1e-9
    assert q_fixed.lower >= float(c_fixed) - 1e-9
    # the cap is tested on the certified lower end; the upper end may be a loose bound
    assert qu.werner_wolf_check(game.n_players, dist, c_fixed, q_fixed.lower) in (True, None)
    if game.input_sizes == (2, 2):
        assert ns.product_worst(game).value <= float(c_worst) + 1e-9


@pytest.mark.acceptance(VALIDATORS)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_worst_case_validators_ma(n):
    c = cl.classical_worst(build_ma(n)).value
    q = qu.quantum_symmetric_worst(symmetric_coeffs(build_ma(n)))
    assert q.upper >= float(c) - 1e-9
    assert qu.werner_wolf_check(n, None, c, q.lower)


@pytest.mark.acceptance(VALIDATORS)
@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_worst_case_validators_ee(m):
    c = cl.classical_worst(build_ee(m)).value
    q = qu.ee_quantum_bounds(m)
    assert q.lower >= c
    assert qu.werner_wolf_check(2, None, c, q.lower)


@pytest.mark.acceptance(VALIDATORS)
def test_no_shared_below_shared_or_and():
    assert ns.product_worst(build_or_and()).value <= float(cl.classical_worst(build_or_and()).value) + 1e-9


@pytest.mark.acceptance(VALIDATORS)
def test_random_xor_validators():
    rng = np.random.default_rng(77)
    for _ in range(30):
        sizes, table = random_game(rng, xor=True)
        game = Game(sizes, table)
        weights = rng.integers(1, 9, size=sizes)
        dist = Distribution({x: Fraction(int(weights[x]), int(weights.sum())) for x in game.inputs()})
        c_fixed = cl.classical_fixed(game, dist).value
        c_worst = cl.classical_worst(game).value
        q = qu.quantum_2xor_fixed(game, dist, seed=2)
        assert c_worst <= c_fixed
        assert q.lower >= float(c_fixed) - 1e-9
        assert qu.werner_wolf_check(2, dist, c_fixed, q.lower) in (True, None)
        if sizes == (2, 2):
            assert ns.product_worst(game).value <= float(c_worst) + 1e-9


# -- oracle equivalence ---------------------------------------------------------------------------------------------


@pytest.mark.acceptance(ORACLE)
def test_classical_worst_matches_vertex_enumeration():
    rng = np.random.default_rng(2024)
    values = set()
    for i in range(200):
        sizes, table = random_game(rng, xor=i % 2 == 0)
        expected = minimax_by_vertices(brute_payoff_matrix(table, sizes))
        got = cl.classical_worst(Game(sizes, table)).value
        assert got == expected, f"game {i}: {got} != {expected}"
        values.add(got)
    # the sample must exercise non-trivial mixed equilibria
    assert any(v.denominator > 1 for v in values)


def _simulation_triples():
    chsh, u2 = build_chsh(), Distribution.uniform((2, 2))
    vec = qu.quantum_2xor_fixed(chsh, u2, seed=4).certificate
    orand = ns.product_worst(build_or_and()).strategy
    return [
        ("chsh mix", chsh, cl.chsh_mix(), u2),
        ("chsh vectors", chsh, vec, u2),
        ("ee4 mix", build_ee(4), cl.ee_mix(4), cl.ee_worst_dist(4)),
        ("nand3 mix", build_nand(3), cl.nand_mix(3), cl.nand_worst_dist(3)),
        ("orand product", build_or_and(), orand, Distribution.uniform((2, 2))),
    ]


@pytest.mark.acceptance(ORACLE)
@pytest.mark.parametrize("k", range(5))
def test_simulation_matches_exact_value(k):
    name, game, strategy, dist = _simulation_triples()[k]
    res = simulate(game, strategy, dist, 10**6, seed=1000 + k)
    exact = exact_value(game, strategy, dist)
    assert abs(res.empirical_value - float(exact)) <= 4 * res.stderr, name
