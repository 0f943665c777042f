"""Quantum (entangled) game values, reported as lower/upper brackets.

Two-player XOR games are handled at the correlation level: a vector
strategy found by alternating ascent gives the lower bound, and the
spectral bound, the circle formula (symmetric games) or the EQUAL-EQUAL
analytic bound give the upper bound.  Symmetric n-player XOR games with
binary inputs use the circle formula directly; their worst case is the
minimax of that formula over Hamming-weight distributions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .game import (
    Distribution,
    Game,
    GameError,
    NotSymmetric,
    SymmetricDistribution,
    SymmetricXorCoeffs,
    match_builtin,
    symmetric_coeffs,
    xor_view,
)
from .solvers import alternating_ascent, local_maxima_on_circle, minimax_circle

__all__ = [
    "QuantumReport",
    "UnsupportedGame",
    "xor_correlation_matrix",
    "spectral_upper_bound",
    "quantum_2xor_fixed",
    "quantum_symmetric_fixed",
    "quantum_symmetric_worst",
    "ee_quantum_bounds",
    "ee_alphabeta_value",
    "ee_s_coefficient",
    "ee_tsirelson_bound",
    "nand_limit_distribution",
    "nmaj_distribution",
    "werner_wolf_check",
]

BRACKET_TOL = 1e-9


class UnsupportedGame(GameError):
    """No quantum method applies (e.g. non-XOR, or non-symmetric with n > 2)."""


@dataclass(frozen=True)
class QuantumReport:
    lower: Any
    upper: Any
    certificate: Any
    method: str  # vector_ascent | circle | minimax | closed_form | analytic_bound
    note: str = ""

    def __post_init__(self):
        if float(self.lower) > float(self.upper) + BRACKET_TOL:
            raise ValueError(f"inconsistent bracket [{self.lower}, {self.upper}]")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> float:
        return float(self.upper) - float(self.lower)


def xor_correlation_matrix(game: Game, dist: Distribution) -> np.ndarray:
    """``G[x, y] = pi(x, y) * V(0, 0 | x, y)`` for a two-player XOR game."""
    if game.n_players != 2:
        raise UnsupportedGame("correlation matrices need exactly two players")
    parity = xor_view(game).parity_table
    return dist.as_array(game.input_sizes) * parity


def spectral_upper_bound(G: np.ndarray) -> float:
    """``sum G_xy <u_x, v_y>`` over unit vectors is at most ``||G||_2 sqrt(|X||Y|)``."""
    G = np.asarray(G, dtype=float)
    sigma = float(np.linalg.norm(G, 2))
    return min(float(np.abs(G).sum()), sigma * math.sqrt(G.shape[0] * G.shape[1]))


def _ee_alpha_beta_of(game: Game, dist: Distribution) -> tuple[int, Fraction] | None:
    known = match_builtin(game)
    if not known or known[0] != "ee" or not dist.exact:
        return None
    m = known[1][0]
    diag = {dist[(i, i)] for i in range(m)}
    off = {dist[(i, j)] for i in range(m) for j in range(m) if i != j}
    if len(diag) == 1 and len(off) == 1:
        return m, off.pop()
    return None


def quantum_2xor_fixed(
    game: Game,
    dist: Distribution,
    *,
    seed: int,
    d: int | None = None,
    restarts: int = 8,
    threads: int = 1,
) -> QuantumReport:
    """Bracket on the entangled value of a two-player XOR game under ``dist``."""
    G = xor_correlation_matrix(game, dist)
    run = alternating_ascent(G, d, restarts, seed=seed, threads=threads)
    lower = run.value
    upper = spectral_upper_bound(G)
    notes = ["lower: vector ascent", "upper: spectral bound"]
    if all(m == 2 for m in game.input_sizes):
        try:
            c = symmetric_coeffs(game)
            p = SymmetricDistribution.from_distribution(dist, 2)
        except (GameError, NotSymmetric):
            pass
        else:
            circ = quantum_symmetric_fixed(c, p).upper
            if circ < upper:
                upper, notes[1] = circ, "upper: circle formula"
    ee = _ee_alpha_beta_of(game, dist)
    if ee is not None:
        analytic = ee_alphabeta_value(*ee).upper
        if float(analytic) <= upper:
            upper, notes[1] = analytic, "upper: EQUAL-EQUAL alpha-beta bound"
    if float(lower) > float(upper):
        # both are the same number up to rounding
        lower = float(upper)
    return QuantumReport(lower, upper, run.strategy, "vector_ascent", "; ".join(notes))


def quantum_symmetric_fixed(c: SymmetricXorCoeffs, p: SymmetricDistribution, grid: int = 4096) -> QuantumReport:
    """Circle formula ``max_{|z|=1} |sum_i p_i c_i z^i|``."""
    if len(c.c) != len(p.p):
        raise GameError(f"{len(c.c)} coefficients but {len(p.p)} class probabilities")
    gamma = np.array([float(pi) * ci for pi, ci in zip(p.p, c.c)])
    point = local_maxima_on_circle(gamma, grid)[0]
    return QuantumReport(point.modulus, point.modulus, (p, point), "circle")


def quantum_symmetric_worst(
    c: SymmetricXorCoeffs,
    tol: float = 1e-6,
    rotations: int = 64,
    grid: int = 4096,
    max_iter: int = 10000,
) -> QuantumReport:
    """Symmetric-adversary minimax of the circle formula."""
    res = minimax_circle(c.c, tol=tol, rotations=rotations, grid=grid, max_iter=max_iter)
    note = "symmetric-adversary minimax"
    if not res.converged:
        note += f"; not converged after {res.iterations} iterations, bracket width {res.upper - res.lower:.3g}"
    p = SymmetricDistribution(res.p)
    return QuantumReport(res.lower, res.upper, p, "minimax", note)


# -- EQUAL-EQUAL closed forms ---------------------------------------------------


def ee_quantum_bounds(m: int) -> QuantumReport:
    if m < 2:
        raise GameError("EQUAL-EQUAL needs m >= 2")
    if m % 2 == 0:
        v = Fraction(m, 3 * m - 4)
        return QuantumReport(v, v, "closed_form: even m", "closed_form")
    return QuantumReport(
        Fraction(m + 1, 3 * m - 1),
        Fraction(m * m + 1, (3 * m - 1) * (m - 1)),
        "closed_form: odd m bracket",
        "closed_form",
    )


def ee_alphabeta_value(m: int, beta) -> QuantumReport:
    """Value of EE_m under ``pi_{alpha,beta}``; alpha follows from normalisation.

    The same bracket holds for the classical value.
    """
    beta = Fraction(beta)
    if m < 2:
        raise GameError("EQUAL-EQUAL needs m >= 2")
    if not 0 <= beta <= Fraction(1, m * (m - 1)):
        raise GameError(f"beta={beta} outside [0, 1/(m(m-1))]")
    threshold = Fraction(2, m * (3 * m - 4))
    if beta >= threshold:
        v = 2 * beta * (m - 1) * m - 1
        return QuantumReport(v, v, "strategy a=0, b=1", "closed_form", "beta >= threshold")
    upper = 1 - beta * (m - 2) * m
    if m % 2 == 0:
        return QuantumReport(upper, upper, "EE strategy mix", "closed_form", "beta < threshold, even m")
    return QuantumReport(1 - beta * (m - 1) ** 2, upper, "EE strategy mix", "closed_form", "beta < threshold, odd m")


def ee_s_coefficient(m: int, alpha, beta) -> Fraction:
    """Coefficient of ``||s||^2`` in the squared quadratic-mean bound."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    return m * beta * (m * beta - 2 * (alpha + beta))


def ee_tsirelson_bound(m: int, alpha, beta, s_norm: float) -> float:
    """``sqrt(m^2 (alpha+beta)^2 + ||s||^2 m beta (m beta - 2(alpha+beta)))``."""
    if not 0 <= s_norm <= m:
        raise GameError("||s|| must lie in [0, m]")
    sq = m * m * (Fraction(alpha) + Fraction(beta)) ** 2
    return math.sqrt(max(0.0, float(sq) + s_norm**2 * float(ee_s_coefficient(m, alpha, beta))))


# -- distributions from the limit lemmas ---------------------------------------------


def nand_limit_distribution(n: int) -> SymmetricDistribution:
    """``p_n = 1/3`` and geometric ``p_i = p q^(n-i)`` below it, ``q = e^(-1/sqrt n)``."""
    if n < 2:
        raise GameError("need n >= 2")
    q = math.exp(-1.0 / math.sqrt(n))
    p = (2.0 / 3.0) * (1.0 - q) / (q * (1.0 - q**n))
    return SymmetricDistribution(tuple(p * q ** (n - i) for i in range(n)) + (1.0 / 3.0,))


def nmaj_distribution(k: int) -> SymmetricDistribution:
    """Distribution on ``n = 2k - 1`` players with ``p_i`` proportional to ``1/|2k-1-2i|``."""
    if k < 1:
        raise GameError("need k >= 1")
    half = [Fraction(1, 2 * k - 1 - 2 * i) for i in range(k)]
    r = half + half[::-1]
    s = 2 * sum(Fraction(1, 2 * i - 1) for i in range(1, k + 1))
    return SymmetricDistribution(tuple(ri / s for ri in r))


def werner_wolf_check(n: int, dist, classical_value, quantum_value, tol: float = 1e-9) -> bool | None:
    """Quantum/classical ratio cap ``2^((n-1)/2)`` for binary-input XOR games.

    Returns None (not applicable) when the classical value is not positive.
    ``dist`` is carried for the record only; the cap holds for every distribution.
    """
    if float(classical_value) <= 0:
        return None
    return float(quantum_value) / float(classical_value) <= 2 ** ((n - 1) / 2) + tol
