"""Classical (shared-randomness) game values.

Fixed-distribution values come from enumerating every deterministic
strategy; worst-case values from the exact zero-sum LP over the
strategies x inputs payoff matrix.  Strategy codes follow
``DeterministicStrategy.encode`` so enumeration order, and therefore
tie-breaking, is reproducible.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .game import (
    DeterministicStrategy,
    Distribution,
    Game,
    GameError,
    MixedStrategy,
    Number,
    input_values,
    match_builtin,
    win_probability,
)
from .solvers import solve_zero_sum

ENUMERATION_CAP = 2**20
INPUT_CAP = 2**16
CELL_CAP = 2**25  # int8 payoff matrix entries held in memory by classical_worst

__all__ = [
    "CapExceeded",
    "ClassicalReport",
    "Interval",
    "classical_fixed",
    "classical_worst",
    "closed_form_classical",
    "payoff_matrix",
    "verify_worst_certificate",
    "chsh_mix",
    "ee_mix",
    "ee_alpha_beta",
    "ee_distribution",
    "ee_worst_dist",
    "nand_mix",
    "nand_worst_dist",
]


class CapExceeded(GameError):
    pass


@dataclass(frozen=True)
class ClassicalReport:
    value: Number
    win_probability: Number
    certificate_strategy: MixedStrategy | None
    certificate_distribution: Distribution | None
    method: str  # "enumeration" | "lp" | "closed_form"
    note: str = ""


@dataclass(frozen=True)
class Interval:
    """Closed bracket on a value the closed forms do not pin down."""

    lower: Number
    upper: Number
    lower_text: str = ""
    upper_text: str = ""
    note: str = ""


def _kernel_args(game: Game, inputs=None):
    n = game.n_players
    inputs = list(game.inputs()) if inputs is None else list(inputs)
    digits = np.array(inputs, dtype=np.int64).reshape(len(inputs), n)
    x_index = np.ravel_multi_index(digits.T, game.input_sizes).astype(np.int64) if inputs else np.zeros(0, np.int64)
    offsets = np.concatenate([[0], np.cumsum(game.input_sizes)[:-1]]).astype(np.int64)
    table_flat = np.ascontiguousarray(game.table.reshape(-1))
    return table_flat, np.ascontiguousarray(x_index), np.ascontiguousarray(digits), offsets


def _check_cap(game: Game, cap: int):
    if game.n_strategies > cap:
        hint = ""
        known = match_builtin(game)
        if known and known[0] in ("chsh", "ee", "nand", "ma"):
            hint = f"; use closed_form_classical({known[0]!r}, ...)"
        raise CapExceeded(f"{game.n_strategies} deterministic strategies exceed the enumeration cap {cap}{hint}")


def payoff_matrix(game: Game, start: int = 0, stop: int | None = None) -> np.ndarray:
    """``int8`` matrix: row = strategy code, column = input (``game.inputs()`` order)."""
    stop = game.n_strategies if stop is None else stop
    return kernels.payoff_block(*_kernel_args(game), start, stop)


def _ranges(total: int, parts: int):
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _best_exact(game: Game, dist: Distribution, threads: int) -> tuple[int, Fraction]:
    support = dist.support()
    den = math.lcm(*(w.denominator for w in dist.weights.values()))
    weights = np.array([int(dist[x] * den) for x in support], dtype=object)
    args = _kernel_args(game, support)
    total = game.n_strategies
    if int(sum(weights)) < 2**62:
        w64 = weights.astype(np.int64)
        if threads > 1 and total > 1:
            with ThreadPoolExecutor(threads) as pool:
                parts = list(pool.map(lambda r: kernels.best_response(*args, w64, *r), _ranges(total, threads)))
        else:
            parts = [kernels.best_response(*args, w64, 0, total)]
        code, score = max(parts, key=lambda cs: (cs[1], -cs[0]))
        return code, Fraction(score, den)
    best_code, best = -1, None
    for lo, hi in _ranges(total, max(1, total // 4096)):
        block = kernels.payoff_block(*args, lo, hi).astype(object) @ weights
        for k, s in enumerate(block):
            if best is None or s > best:
                best_code, best = lo + k, s
    return best_code, Fraction(int(best), den)


def _best_numeric(game: Game, dist: Distribution) -> tuple[int, float]:
    support = dist.support()
    weights = np.array([float(dist[x]) for x in support])
    args = _kernel_args(game, support)
    best_code, best = -1, -math.inf
    for lo, hi in _ranges(game.n_strategies, max(1, game.n_strategies // 4096)):
        scores = kernels.payoff_block(*args, lo, hi).astype(float) @ weights
        j = int(np.argmax(scores))
        if scores[j] > best:
            best_code, best = lo + j, float(scores[j])
    return best_code, best


def classical_fixed(game: Game, dist: Distribution, cap: int = ENUMERATION_CAP, threads: int = 1) -> ClassicalReport:
    """Best deterministic strategy under a known distribution."""
    _check_cap(game, cap)
    dist.check_shape(game.input_sizes)
    if dist.exact:
        code, value = _best_exact(game, dist, threads)
    else:
        code, value = _best_numeric(game, dist)
    strategy = MixedStrategy.pure(DeterministicStrategy.decode(code, game.input_sizes))
    return ClassicalReport(value, win_probability(value), strategy, dist, "enumeration")


def classical_worst(
    game: Game, cap: int = ENUMERATION_CAP, input_cap: int = INPUT_CAP, cell_cap: int = CELL_CAP
) -> ClassicalReport:
    """Worst-case value ``max_mix min_input`` as an exact LP with certificates."""
    _check_cap(game, cap)
    if game.n_inputs > input_cap:
        raise CapExceeded(f"{game.n_inputs} input tuples exceed the cap {input_cap}")
    if game.n_inputs * game.n_strategies > cell_cap:
        raise CapExceeded(f"payoff matrix {game.n_strategies} x {game.n_inputs} exceeds {cell_cap} cells")
    sol = solve_zero_sum(payoff_matrix(game))
    mix = MixedStrategy(tuple(
        (w, DeterministicStrategy.decode(code, game.input_sizes)) for code, w in enumerate(sol.row_mix) if w
    ))
    inputs = list(game.inputs())
    dist = Distribution({inputs[j]: p for j, p in enumerate(sol.col_mix) if p})
    note = ""
    known = match_builtin(game)
    if known and known[0] == "ma" and known[1][0] % 2 == 1:
        note = "computed by LP; for odd n the closed forms only bracket the value"
    return ClassicalReport(sol.value, win_probability(sol.value), mix, dist, "lp", note)


def verify_worst_certificate(game: Game, report: ClassicalReport) -> bool:
    """Exact check: the mix earns >= value on every input and the
    distribution holds every deterministic strategy to <= value."""
    per_input = input_values(game, report.certificate_strategy)
    if min(per_input.values()) < report.value:
        return False
    return classical_fixed(game, report.certificate_distribution).value <= report.value


# -- constructions from the classical theorems ---------------------------------


def chsh_mix() -> MixedStrategy:
    """The four strategies that each lose on a different input, at weight 1/4."""
    S1 = DeterministicStrategy(((0, 0), (0, 0)))
    S2 = DeterministicStrategy(((0, 1), (0, 0)))
    S3 = DeterministicStrategy(((0, 0), (0, 1)))
    S4 = DeterministicStrategy(((0, 1), (1, 0)))
    return MixedStrategy.uniform([S1, S2, S3, S4])


def ee_mix(m: int) -> MixedStrategy:
    """Constant-unequal strategy with weight p, balanced splits uniformly otherwise."""
    if m < 2:
        raise GameError("EQUAL-EQUAL needs m >= 2")
    p = Fraction(m - 2, 3 * m - 4) if m % 2 == 0 else Fraction(m - 1, 3 * m - 1)
    unequal = DeterministicStrategy(((0,) * m, (1,) * m))
    splits = []
    for zeros in itertools.combinations(range(m), m // 2):
        answers = tuple(0 if i in zeros else 1 for i in range(m))
        splits.append(DeterministicStrategy((answers, answers)))
    share = (1 - p) / len(splits)
    return MixedStrategy(((p, unequal),) + tuple((share, s) for s in splits))


def ee_alpha_beta(m: int) -> tuple[Fraction, Fraction]:
    """Diagonal and off-diagonal weights of the least favourable EE distribution."""
    if m < 2:
        raise GameError("EQUAL-EQUAL needs m >= 2")
    if m % 2:
        return Fraction(m - 1, m * (3 * m - 1)), Fraction(2, (m - 1) * (3 * m - 1))
    return Fraction(m - 2, m * (3 * m - 4)), Fraction(2, m * (3 * m - 4))


def ee_distribution(m: int, alpha: Number, beta: Number) -> Distribution:
    return Distribution({(i, j): (alpha if i == j else beta) for i in range(m) for j in range(m)})


def ee_worst_dist(m: int) -> Distribution:
    return ee_distribution(m, *ee_alpha_beta(m))


_NAND_PLAYER = {"0": (0, 0), "x": (0, 1), "not x": (1, 0)}


def nand_mix(n: int) -> MixedStrategy:
    """All-zero strategy plus the 2^n - 1 'odd number of x_i' strategies."""
    if n < 2:
        raise GameError("n-party AND mix needs n >= 2")
    den = 3 * 2 ** (n - 1) - 2
    comps = [(Fraction(2 ** (n - 1) - 1, den), DeterministicStrategy((_NAND_PLAYER["0"],) * n))]
    for size in range(1, n + 1):
        for chosen in itertools.combinations(range(n), size):
            players = [_NAND_PLAYER["0"]] * n
            for i in chosen:
                players[i] = _NAND_PLAYER["x"]
            if size % 2 == 0:
                players[chosen[-1]] = _NAND_PLAYER["not x"]
            comps.append((Fraction(1, den), DeterministicStrategy(tuple(players))))
    return MixedStrategy(tuple(comps))


def nand_worst_dist(n: int) -> Distribution:
    if n < 2:
        raise GameError("n-party AND distribution needs n >= 2")
    den = 3 * 2 ** (n - 1) - 2
    ones = (1,) * n
    return Distribution({
        x: Fraction(2 ** (n - 1) - 1, den) if x == ones else Fraction(1, den)
        for x in itertools.product((0, 1), repeat=n)
    })


def closed_form_classical(game_id: str, *params: int) -> ClassicalReport | Interval:
    """Worst-case classical values known in closed form."""
    if game_id == "chsh":
        v = Fraction(1, 2)
        return ClassicalReport(v, win_probability(v), chsh_mix(), Distribution.uniform((2, 2)), "closed_form")
    if game_id == "ee":
        (m,) = params
        v = Fraction(m, 3 * m - 4) if m % 2 == 0 else Fraction(m + 1, 3 * m - 1)
        return ClassicalReport(v, win_probability(v), ee_mix(m), ee_worst_dist(m), "closed_form")
    if game_id == "nand":
        (n,) = params
        v = Fraction(2 ** (n - 2), 3 * 2 ** (n - 2) - 1)
        return ClassicalReport(v, win_probability(v), nand_mix(n), nand_worst_dist(n), "closed_form")
    if game_id == "ma":
        (n,) = params
        if n < 2:
            raise GameError("Mermin-Ardehali needs n >= 2")
        if n % 2 == 0:
            v = Fraction(1, 2 ** (n // 2))
            return ClassicalReport(v, win_probability(v), None, None, "closed_form")
        return Interval(
            2.0 ** (-n / 2), Fraction(1, 2 ** ((n - 1) // 2)),
            lower_text=f"2^(-{n}/2)", upper_text=f"2^(-{(n - 1) // 2})",
            note="odd n: only bracketed (upper bound is the uniform-distribution value)",
        )
    raise GameError(f"no closed form for {game_id!r}; known: chsh, ee, nand, ma")
