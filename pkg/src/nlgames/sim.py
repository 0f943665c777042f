"""Monte Carlo referee.

Rounds are drawn in fixed-size batches from a Philox counter-based
generator seeded with the user's seed, so a (seed, rounds) pair gives the
same tally on every platform and NumPy build that ships Philox.  Within a
batch the draw order is: inputs, then the shared-randomness component
(mixed strategies only), then the per-player answer coins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game import DeterministicStrategy, Distribution, Game, GameError, MixedStrategy, value_of_mixed, xor_view
from .noshared import ProductStrategy, product_value
from .solvers import VectorStrategy

__all__ = ["SimulationResult", "simulate", "exact_value", "BATCH"]

BATCH = 1 << 16


@dataclass(frozen=True)
class SimulationResult:
    rounds: int
    wins: int
    empirical_value: float
    stderr: float
    seed: int

    @classmethod
    def from_tally(cls, rounds: int, wins: int, seed: int) -> SimulationResult:
        ev = 2.0 * wins / rounds - 1.0
        return cls(rounds, wins, ev, math.sqrt(max(0.0, 1.0 - ev * ev) / rounds), seed)

    def within(self, exact: float, k: float = 4.0) -> bool:
        """``|empirical - exact| <= k * stderr`` (a zero stderr demands equality)."""
        return abs(self.empirical_value - float(exact)) <= k * self.stderr + 1e-12


def _answers_mixed(strategy: MixedStrategy, sizes, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    weights = np.array([float(w) for w, _ in strategy])
    k = rng.choice(len(weights), size=len(x), p=weights / weights.sum())
    out = np.empty_like(x)
    for i in range(len(sizes)):
        tab = np.array([s.tables[i] for _, s in strategy], dtype=np.int64)  # (K, m_i)
        out[:, i] = tab[k, x[:, i]]
    return out


def _answers_product(strategy: ProductStrategy, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    coins = rng.random(x.shape)
    out = np.empty_like(x)
    for i, row in enumerate(strategy.q):
        out[:, i] = coins[:, i] < np.asarray(row)[x[:, i]]
    return out


def _answers_vector(strategy: VectorStrategy, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # a uniform, b = a exactly with probability (1 + <u_x, v_y>) / 2
    corr = strategy.correlations()[x[:, 0], x[:, 1]]
    a = rng.integers(0, 2, size=len(x))
    flip = rng.random(len(x)) >= (1.0 + corr) / 2.0
    return np.stack([a, a ^ flip], axis=1)


def _check_shapes(game: Game, strategy, dist: Distribution):
    dist.check_shape(game.input_sizes)
    if isinstance(strategy, VectorStrategy):
        if game.n_players != 2:
            raise GameError("vector strategies are simulated for two-player XOR games only")
        xor_view(game)
        if (strategy.u.shape[0], strategy.v.shape[0]) != game.input_sizes:
            raise GameError("vector strategy does not match the input alphabets")
    elif strategy.input_sizes != game.input_sizes:
        raise GameError(f"strategy shape {strategy.input_sizes} does not match game {game.input_sizes}")


def simulate(game: Game, strategy, dist: Distribution, rounds: int, seed: int) -> SimulationResult:
    """Play ``rounds`` independent rounds and tally wins."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if isinstance(strategy, DeterministicStrategy):
        strategy = MixedStrategy.pure(strategy)
    if not isinstance(strategy, (MixedStrategy, ProductStrategy, VectorStrategy)):
        raise TypeError(f"cannot simulate a {type(strategy).__name__}")
    _check_shapes(game, strategy, dist)
    rng = np.random.Generator(np.random.Philox(seed))
    support = np.array(dist.support(), dtype=np.int64).reshape(-1, game.n_players)
    probs = np.array([float(dist[tuple(x)]) for x in support])
    probs /= probs.sum()
    n = game.n_players
    wins = 0
    left = rounds
    while left:
        size = min(BATCH, left)
        x = support[rng.choice(len(support), size=size, p=probs)]
        if isinstance(strategy, MixedStrategy):
            a = _answers_mixed(strategy, game.input_sizes, x, rng)
        elif isinstance(strategy, ProductStrategy):
            a = _answers_product(strategy, x, rng)
        else:
            a = _answers_vector(strategy, x, rng)
        idx = tuple(x[:, i] for i in range(n)) + tuple(a[:, i] for i in range(n))
        wins += int(np.count_nonzero(game.table[idx] == 1))
        left -= size
    return SimulationResult.from_tally(rounds, wins, seed)


def exact_value(game: Game, strategy, dist: Distribution):
    """Expected payoff of ``strategy`` under ``dist`` (exact for rational mixes)."""
    if isinstance(strategy, (MixedStrategy, DeterministicStrategy)):
        return value_of_mixed(game, strategy, dist)
    if isinstance(strategy, ProductStrategy):
        return sum(float(w) * product_value(game, strategy, x) for x, w in dist.items())
    if isinstance(strategy, VectorStrategy):
        G = dist.as_array(game.input_sizes) * xor_view(game).parity_table
        return float(np.sum(G * strategy.correlations()))
    raise TypeError(f"no exact value for a {type(strategy).__name__}")
