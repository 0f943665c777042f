"""Worst-case play without shared randomness.

Each player randomises independently, so a strategy is one table per
player giving the probability of answering 1 on each input.  For
two-player XOR games the question "is any input won with probability
> 1/2 on every input" collapses to a 2-colouring problem; for small
binary games the product value is found by a grid search with exact
inner maximisation followed by golden-section polishing.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .game import DeterministicStrategy, Game, GameError, InputTuple, match_builtin, xor_view
from .solvers import golden_section_max

__all__ = [
    "ProductStrategy",
    "PerfectDeterministic",
    "AtMostHalf",
    "ProductWorst",
    "product_value",
    "product_min_value",
    "round_product",
    "xor_dichotomy",
    "product_worst",
]


@dataclass(frozen=True)
class ProductStrategy:
    """``q[i][x]`` is the probability that player ``i`` answers 1 on input ``x``."""

    q: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        q = tuple(tuple(float(v) for v in row) for row in self.q)
        for row in q:
            for v in row:
                if not 0.0 <= v <= 1.0 or math.isnan(v):
                    raise GameError(f"response probability {v} outside [0, 1]")
        object.__setattr__(self, "q", q)

    @property
    def input_sizes(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.q)

    @classmethod
    def from_deterministic(cls, s: DeterministicStrategy) -> ProductStrategy:
        return cls(tuple(tuple(float(a) for a in row) for row in s.tables))

    def is_deterministic(self) -> bool:
        return all(v in (0.0, 1.0) for row in self.q for v in row)


@dataclass(frozen=True)
class PerfectDeterministic:
    strategy: DeterministicStrategy


@dataclass(frozen=True)
class AtMostHalf:
    """No deterministic strategy wins every input; ``cycle`` is an odd-parity
    cycle of input pairs that no assignment can satisfy."""

    cycle: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class ProductWorst:
    value: float
    strategy: ProductStrategy
    exact_text: str = ""
    exact_value: float | None = field(default=None, compare=False)

    def __iter__(self):
        yield self.value
        yield self.strategy


def product_value(game: Game, s: ProductStrategy, x: InputTuple) -> float:
    """Expected payoff on input ``x`` when players answer independently."""
    if s.input_sizes != game.input_sizes:
        raise GameError(f"strategy shape {s.input_sizes} does not match game {game.input_sizes}")
    probs = [(1.0 - s.q[i][xi], s.q[i][xi]) for i, xi in enumerate(x)]
    total = 0.0
    for a in itertools.product((0, 1), repeat=game.n_players):
        w = math.prod(probs[i][ai] for i, ai in enumerate(a))
        if w:
            total += w * game.value(x, a)
    return total


def product_min_value(game: Game, s: ProductStrategy) -> float:
    return min(product_value(game, s, x) for x in game.inputs())


def round_product(s: ProductStrategy) -> DeterministicStrategy:
    """Answer 1 exactly where the product strategy answers 1 with probability > 1/2."""
    return DeterministicStrategy(tuple(tuple(1 if v > 0.5 else 0 for v in row) for row in s.q))


def xor_dichotomy(game: Game) -> PerfectDeterministic | AtMostHalf:
    """Decide whether a two-player XOR game is won on every input by one
    deterministic strategy, by 2-colouring the input graph."""
    view = xor_view(game)
    if game.n_players != 2:
        raise GameError("the dichotomy applies to two-player games")
    nx, ny = game.input_sizes
    need = view.winning_parity
    # node ("a", x) carries a(x), node ("b", y) carries b(y); edge demands a(x) ^ b(y) = need(x, y)
    colour: dict[tuple[str, int], int] = {}
    parent: dict[tuple[str, int], tuple[str, int] | None] = {}
    nodes = [("a", x) for x in range(nx)] + [("b", y) for y in range(ny)]

    def neighbours(node):
        side, k = node
        if side == "a":
            return [(("b", y), need((k, y))) for y in range(ny)]
        return [(("a", x), need((x, k))) for x in range(nx)]

    for root in nodes:
        if root in colour:
            continue
        colour[root], parent[root] = 0, None
        queue = deque([root])
        while queue:
            node = queue.popleft()
            for nb, parity in neighbours(node):
                want = colour[node] ^ parity
                if nb not in colour:
                    colour[nb], parent[nb] = want, node
                    queue.append(nb)
                elif colour[nb] != want:
                    return AtMostHalf(_odd_cycle(parent, node, nb))
    tables = (
        tuple(colour[("a", x)] for x in range(nx)),
        tuple(colour[("b", y)] for y in range(ny)),
    )
    return PerfectDeterministic(DeterministicStrategy(tables))


def _odd_cycle(parent, u, v) -> tuple[tuple[int, int], ...]:
    """Input pairs along tree path u..lca..v plus the closing edge (u, v)."""

    def path(node):
        out = [node]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pu, pv = path(u), path(v)
    common = set(pu) & set(pv)
    pu = pu[: next(i for i, n in enumerate(pu) if n in common) + 1]
    pv = pv[: next(i for i, n in enumerate(pv) if n in common)]
    # u -> ... -> lca -> ... -> v, closed by the edge (v, u)
    walk = pu + pv[::-1]
    edges = []
    for a, b in zip(walk, walk[1:] + walk[:1]):
        x, y = (a[1], b[1]) if a[0] == "a" else (b[1], a[1])
        edges.append((x, y))
    return tuple(edges)


# -- product minimax for 2 players, binary inputs -------------------------------------


def _line_coeffs(game: Game, q1: np.ndarray):
    """For each input (x, y): value = A + B * q2(y), vectorised over rows of ``q1``.

    ``q1`` has shape (k, 2); returns arrays of shape (k, 2, 2).
    """
    V = game.table.astype(float)  # V[x, y, a, b]
    p1 = np.stack([1.0 - q1, q1], axis=-1)  # (k, x, a)
    # E_a V for each b: (k, x, y, b)
    Eb = np.einsum("kxa,xyab->kxyb", p1, V)
    A = Eb[..., 0]
    B = Eb[..., 1] - Eb[..., 0]
    return A, B


def _inner_best(A: np.ndarray, B: np.ndarray):
    """Exact ``max_t min_x (A_x + B_x t)`` over ``t`` in [0, 1] per (row, y).

    ``A``, ``B`` have shape (k, 2, 2) indexed (row, x, y); returns value and
    argmax, both (k, 2).
    """
    # candidates: t = 0, t = 1, the crossing point of the two lines
    dA = A[:, 0, :] - A[:, 1, :]
    dB = B[:, 1, :] - B[:, 0, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = np.where(dB != 0, dA / dB, 0.0)
    cross = np.clip(np.nan_to_num(cross), 0.0, 1.0)
    cands = np.stack([np.zeros_like(cross), np.ones_like(cross), cross], axis=-1)  # (k, y, 3)
    vals = np.min(A[:, :, :, None] + B[:, :, :, None] * cands[:, None, :, :], axis=1)  # (k, y, 3)
    pick = np.argmax(vals, axis=-1)
    best = np.take_along_axis(vals, pick[..., None], -1)[..., 0]
    t = np.take_along_axis(cands, pick[..., None], -1)[..., 0]
    return best, t


def _outer(game: Game, q1: np.ndarray):
    A, B = _line_coeffs(game, q1)
    best, t = _inner_best(A, B)
    return best.min(axis=1), t


def product_worst(game: Game, grid: int = 200, refine_iters: int = 6) -> ProductWorst:
    """Lower bound on the no-shared-randomness worst-case value of a
    two-player binary-input game, with the product strategy achieving it.

    The first player's table is searched on a ``grid`` x ``grid`` lattice;
    for each point the second player's best reply is exact (each ``q2(y)``
    only affects the inputs with that ``y``).  The best cell is polished by
    ``refine_iters`` rounds of coordinate-wise golden section.
    """
    if game.n_players != 2 or game.input_sizes != (2, 2):
        raise GameError("product_worst supports two players with binary inputs only")
    ticks = np.linspace(0.0, 1.0, grid + 1)
    q1 = np.array(list(itertools.product(ticks, ticks)))
    vals, _ = _outer(game, q1)
    # ties resolve to the lexicographically smallest table
    k = int(np.flatnonzero(vals >= vals.max())[0])
    point = q1[k].copy()
    h = 1.0 / grid

    def f(coord, v):
        trial = point.copy()
        trial[coord] = v
        return float(_outer(game, trial[None, :])[0][0])

    for _ in range(refine_iters):
        for coord in (0, 1):
            lo, hi = max(0.0, point[coord] - h), min(1.0, point[coord] + h)
            cand, _ = golden_section_max(lambda v: f(coord, v), lo, hi, 1e-13)
            if f(coord, cand) >= f(coord, point[coord]):
                point[coord] = cand
        h /= 4
    value, t = _outer(game, point[None, :])
    strategy = ProductStrategy((tuple(point), tuple(t[0])))
    value = float(min(product_value(game, strategy, x) for x in game.inputs()))
    known = match_builtin(game)
    if known and known[0] == "orand":
        return ProductWorst(value, strategy, "sqrt(5) - 2", math.sqrt(5) - 2)
    return ProductWorst(value, strategy)
