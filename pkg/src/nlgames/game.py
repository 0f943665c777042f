"""Game representation, builtin games, distributions and strategies.

Inputs are 0-based integers internally (player ``i`` receives a value in
``range(input_sizes[i])``); outputs are single bits.  A game is stored as a
dense ``int8`` array ``table[x_1, ..., x_n, a_1, ..., a_n]`` with entries
+1 (win) and -1 (loss).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

Number = Fraction | float
InputTuple = tuple[int, ...]

NUMERIC_SUM_TOL = 1e-12


class GameError(ValueError):
    """Base class for invalid game/strategy/distribution arguments."""


class NotXorGame(GameError):
    pass


class NotSymmetric(GameError):
    pass


class NotBinaryInputs(GameError):
    pass


class ShapeMismatch(GameError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.int8, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Game:
    input_sizes: tuple[int, ...]
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.input_sizes)
        if len(sizes) < 1:
            raise GameError("a game needs at least one player")
        if any(m < 1 for m in sizes):
            raise GameError(f"input alphabets must be non-empty, got {sizes}")
        table = np.asarray(self.table)
        expected = sizes + (2,) * len(sizes)
        if table.shape != expected:
            raise ShapeMismatch(f"predicate table has shape {table.shape}, expected {expected}")
        if not np.all((table == 1) | (table == -1)):
            raise GameError("predicate entries must be +1 or -1")
        object.__setattr__(self, "input_sizes", sizes)
        object.__setattr__(self, "table", _frozen(table))

    @classmethod
    def from_predicate(
        cls,
        input_sizes: Sequence[int],
        wins: Callable[[InputTuple, InputTuple], bool],
        name: str = "",
    ) -> Game:
        sizes = tuple(input_sizes)
        n = len(sizes)
        table = np.empty(sizes + (2,) * n, dtype=np.int8)
        for x in itertools.product(*(range(m) for m in sizes)):
            for a in itertools.product((0, 1), repeat=n):
                table[x + a] = 1 if wins(x, a) else -1
        return cls(sizes, table, name)

    @classmethod
    def from_parity(cls, parity: np.ndarray, name: str = "") -> Game:
        """Build an XOR game from ``parity[x]``, the winning value of the XOR of outputs."""
        parity = np.asarray(parity)
        sizes = parity.shape
        n = len(sizes)
        sign_x = np.where(parity == 0, 1, -1).astype(np.int8)
        out_parity = np.zeros((2,) * n, dtype=np.int8)
        for a in itertools.product((0, 1), repeat=n):
            out_parity[a] = sum(a) % 2
        sign_a = np.where(out_parity == 0, 1, -1).astype(np.int8)
        table = sign_x.reshape(sizes + (1,) * n) * sign_a.reshape((1,) * n + (2,) * n)
        return cls(sizes, table, name)

    @property
    def n_players(self) -> int:
        return len(self.input_sizes)

    @property
    def n_inputs(self) -> int:
        return math.prod(self.input_sizes)

    @property
    def n_strategies(self) -> int:
        return 2 ** sum(self.input_sizes)

    def inputs(self) -> Iterator[InputTuple]:
        return itertools.product(*(range(m) for m in self.input_sizes))

    def value(self, x: InputTuple, a: InputTuple) -> int:
        return int(self.table[tuple(x) + tuple(a)])

    def same_table(self, other: Game) -> bool:
        return self.input_sizes == other.input_sizes and np.array_equal(self.table, other.table)

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return self.name == other.name and self.same_table(other)

    def __hash__(self):
        return hash((self.name, self.input_sizes, self.table.tobytes()))

    def __repr__(self):
        return f"Game(name={self.name!r}, input_sizes={self.input_sizes})"


@dataclass(frozen=True, eq=False)
class XorGameView:
    base: Game
    parity_table: np.ndarray  # V'(0|x) in {+1, -1}

    def winning_parity(self, x: InputTuple) -> int:
        return 0 if self.parity_table[tuple(x)] == 1 else 1

    def reconstruct(self) -> Game:
        parity = np.where(self.parity_table == 1, 0, 1)
        return Game.from_parity(parity, self.base.name)


@dataclass(frozen=True)
class SymmetricXorCoeffs:
    """Winning sign ``c[i]`` of the all-zero answer on inputs of Hamming weight ``i``."""

    n: int
    c: tuple[int, ...]

    def __post_init__(self):
        if len(self.c) != self.n + 1:
            raise GameError(f"need {self.n + 1} coefficients, got {len(self.c)}")
        if any(ci not in (1, -1) for ci in self.c):
            raise GameError("coefficients must be +1 or -1")
        object.__setattr__(self, "c", tuple(int(ci) for ci in self.c))

    def parity_table(self) -> np.ndarray:
        weights = np.indices((2,) * self.n).sum(axis=0)
        return np.asarray(self.c, dtype=np.int8)[weights]

    def to_game(self, name: str = "") -> Game:
        return Game.from_parity(np.where(self.parity_table() == 1, 0, 1), name)


def _as_number(w) -> Number:
    if isinstance(w, Fraction):
        return w
    if isinstance(w, (int, np.integer)):
        return Fraction(int(w))
    if isinstance(w, str):
        return Fraction(w)
    return float(w)


def _check_normalized(total, exact: bool, what: str):
    if exact:
        if total != 1:
            raise GameError(f"{what} sum to {total}, not exactly 1")
    elif abs(total - 1.0) > NUMERIC_SUM_TOL:
        raise GameError(f"{what} sum to {total!r}, not 1 within {NUMERIC_SUM_TOL}")


@dataclass(frozen=True, eq=False)
class Distribution:
    """Referee distribution over input tuples; zero weights are dropped."""

    weights: Mapping[InputTuple, Number]

    def __post_init__(self):
        clean: dict[InputTuple, Number] = {}
        for x, w in self.weights.items():
            w = _as_number(w)
            if w < 0:
                raise GameError(f"negative probability {w} at input {x}")
            if w != 0:
                key = tuple(int(v) for v in x)
                clean[key] = clean.get(key, 0) + w
        if not clean:
            raise GameError("distribution has no support")
        exact = all(isinstance(w, Fraction) for w in clean.values())
        _check_normalized(sum(clean.values()), exact, "probabilities")
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @classmethod
    def uniform(cls, input_sizes: Sequence[int]) -> Distribution:
        total = math.prod(input_sizes)
        return cls({x: Fraction(1, total) for x in itertools.product(*(range(m) for m in input_sizes))})

    @classmethod
    def point(cls, x: InputTuple) -> Distribution:
        return cls({tuple(x): Fraction(1)})

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights.values())

    def __getitem__(self, x: InputTuple) -> Number:
        return self.weights.get(tuple(x), Fraction(0) if self.exact else 0.0)

    def items(self):
        return self.weights.items()

    def support(self) -> list[InputTuple]:
        return list(self.weights)

    def check_shape(self, input_sizes: Sequence[int]):
        for x in self.weights:
            if len(x) != len(input_sizes) or any(not 0 <= xi < m for xi, m in zip(x, input_sizes)):
                raise ShapeMismatch(f"input {x} outside alphabets {tuple(input_sizes)}")

    def as_array(self, input_sizes: Sequence[int]) -> np.ndarray:
        self.check_shape(input_sizes)
        arr = np.zeros(tuple(input_sizes))
        for x, w in self.weights.items():
            arr[x] = float(w)
        return arr

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.weights == other.weights

    def __hash__(self):
        return hash(tuple(self.weights.items()))


@dataclass(frozen=True)
class SymmetricDistribution:
    """Distribution aggregated by Hamming weight: ``p[i]`` is the mass of all inputs with ``i`` ones."""

    p: tuple[Number, ...]

    def __post_init__(self):
        p = tuple(_as_number(v) for v in self.p)
        if len(p) < 2:
            raise GameError("a symmetric distribution needs at least n+1 = 2 classes")
        if any(v < 0 for v in p):
            raise GameError("negative class probability")
        _check_normalized(sum(p), all(isinstance(v, Fraction) for v in p), "class probabilities")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.p)

    @classmethod
    def uniform(cls, n: int) -> SymmetricDistribution:
        return cls(tuple(Fraction(math.comb(n, i), 2**n) for i in range(n + 1)))

    @classmethod
    def from_distribution(cls, dist: Distribution, n: int) -> SymmetricDistribution:
        """Aggregate ``dist`` by Hamming weight; raises NotSymmetric unless it is constant on classes."""
        p = [Fraction(0) if dist.exact else 0.0] * (n + 1)
        per_input: dict[int, set] = {}
        for x in itertools.product((0, 1), repeat=n):
            w = dist[x]
            p[sum(x)] += w
            per_input.setdefault(sum(x), set()).add(w)
        for k, vals in per_input.items():
            if dist.exact and len(vals) > 1:
                raise NotSymmetric(f"weights differ within Hamming class {k}")
            if not dist.exact and max(vals) - min(vals) > NUMERIC_SUM_TOL:
                raise NotSymmetric(f"weights differ within Hamming class {k}")
        return cls(tuple(p))

    def expand(self) -> Distribution:
        n = self.n
        weights = {}
        for x in itertools.product((0, 1), repeat=n):
            k = sum(x)
            weights[x] = self.p[k] / math.comb(n, k)
        if not self.exact:
            weights = {x: float(w) for x, w in weights.items()}
            total = sum(weights.values())
            weights = {x: w / total for x, w in weights.items()}
        return Distribution(weights)


@dataclass(frozen=True)
class DeterministicStrategy:
    """``tables[i][x_i]`` is player ``i``'s answer bit on input ``x_i``."""

    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        tables = tuple(tuple(int(b) for b in t) for t in self.tables)
        if any(b not in (0, 1) for t in tables for b in t):
            raise GameError("answers must be bits")
        object.__setattr__(self, "tables", tables)

    @property
    def input_sizes(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.tables)

    def respond(self, x: InputTuple) -> InputTuple:
        return tuple(t[xi] for t, xi in zip(self.tables, x))

    def encode(self) -> int:
        """Integer code: bit ``offset_i + x_i`` holds player ``i``'s answer to ``x_i``."""
        code, offset = 0, 0
        for t in self.tables:
            for xi, b in enumerate(t):
                code |= b << (offset + xi)
            offset += len(t)
        return code

    @classmethod
    def decode(cls, code: int, input_sizes: Sequence[int]) -> DeterministicStrategy:
        tables, offset = [], 0
        for m in input_sizes:
            tables.append(tuple((code >> (offset + xi)) & 1 for xi in range(m)))
            offset += m
        return cls(tuple(tables))

    @classmethod
    def constant(cls, input_sizes: Sequence[int], bits: Sequence[int]) -> DeterministicStrategy:
        return cls(tuple((b,) * m for m, b in zip(input_sizes, bits)))


@dataclass(frozen=True)
class MixedStrategy:
    """Convex combination of deterministic strategies (shared randomness).

    Duplicate strategies are merged and the components are kept sorted by
    encoding, so two equal mixes compare equal.
    """

    components: tuple[tuple[Fraction, DeterministicStrategy], ...]

    def __post_init__(self):
        merged: dict[DeterministicStrategy, Fraction] = {}
        for w, s in self.components:
            w = Fraction(w)
            if w < 0:
                raise GameError("negative mixture weight")
            if w:
                merged[s] = merged.get(s, Fraction(0)) + w
        if not merged:
            raise GameError("empty strategy mix")
        sizes = {s.input_sizes for s in merged}
        if len(sizes) != 1:
            raise ShapeMismatch("strategies in a mix must share input alphabets")
        _check_normalized(sum(merged.values()), True, "mixture weights")
        comps = tuple(sorted(((w, s) for s, w in merged.items()), key=lambda ws: ws[1].encode()))
        object.__setattr__(self, "components", comps)

    @classmethod
    def pure(cls, s: DeterministicStrategy) -> MixedStrategy:
        return cls(((Fraction(1), s),))

    @classmethod
    def uniform(cls, strategies: Iterable[DeterministicStrategy]) -> MixedStrategy:
        strategies = list(strategies)
        return cls(tuple((Fraction(1, len(strategies)), s) for s in strategies))

    @property
    def input_sizes(self) -> tuple[int, ...]:
        return self.components[0][1].input_sizes

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def win_probability(value: Number) -> Number:
    if isinstance(value, Fraction):
        return Fraction(1, 2) + value / 2
    return 0.5 + 0.5 * value


def value_of_mixed(game: Game, strategy: MixedStrategy | DeterministicStrategy, dist: Distribution) -> Number:
    """Exact game value (win minus loss probability) of a strategy mix under ``dist``."""
    if isinstance(strategy, DeterministicStrategy):
        strategy = MixedStrategy.pure(strategy)
    if strategy.input_sizes != game.input_sizes:
        raise ShapeMismatch(f"strategy alphabets {strategy.input_sizes} != game {game.input_sizes}")
    dist.check_shape(game.input_sizes)
    total = Fraction(0) if dist.exact else 0.0
    for x, px in dist.items():
        inner = sum(w * game.table[x + s.respond(x)] for w, s in strategy)
        total += px * (inner if dist.exact else float(inner))
    return total


def input_values(game: Game, strategy: MixedStrategy) -> dict[InputTuple, Fraction]:
    """Value of the mix on every single input (what a point-mass referee sees)."""
    return {x: sum((w * int(game.table[x + s.respond(x)]) for w, s in strategy), Fraction(0)) for x in game.inputs()}


# -- XOR structure ----------------------------------------------------------


def xor_view(game: Game) -> XorGameView:
    n = game.n_players
    zero = (0,) * n
    base = game.table[(Ellipsis,) + zero]
    rebuilt = Game.from_parity(np.where(base == 1, 0, 1), game.name)
    if not np.array_equal(rebuilt.table, game.table):
        bad = np.argwhere(np.any(rebuilt.table != game.table, axis=tuple(range(n, 2 * n))))
        raise NotXorGame(f"{game.name or 'game'} is not an XOR game with one winning parity (input {tuple(int(v) for v in bad[0])})")
    parity = np.array(base, dtype=np.int8)
    parity.setflags(write=False)
    return XorGameView(game, parity)


def is_xor_game(game: Game) -> bool:
    try:
        xor_view(game)
    except NotXorGame:
        return False
    return True


def symmetric_coeffs(game: Game) -> SymmetricXorCoeffs:
    if any(m != 2 for m in game.input_sizes):
        raise NotBinaryInputs(f"{game.name or 'game'} has input sizes {game.input_sizes}")
    parity = xor_view(game).parity_table
    n = game.n_players
    c: list[int | None] = [None] * (n + 1)
    for x in game.inputs():
        k, v = sum(x), int(parity[x])
        if c[k] is None:
            c[k] = v
        elif c[k] != v:
            raise NotSymmetric(f"parity differs within Hamming weight {k}")
    return SymmetricXorCoeffs(n, tuple(c))


def is_symmetric_xor(game: Game) -> bool:
    try:
        symmetric_coeffs(game)
    except GameError:
        return False
    return True


# -- builtin games -----------------------------------------------------------


def _symmetric_game(n: int, parity_of_weight: Callable[[int], int], name: str) -> Game:
    weights = np.indices((2,) * n).sum(axis=0)
    parity = np.vectorize(parity_of_weight, otypes=[np.int8])(weights)
    return Game.from_parity(parity, name)


def build_chsh() -> Game:
    return Game.from_parity(np.array([[0, 0], [0, 1]]), "chsh")


# winning parity as a function of the input Hamming weight k, for n players
_WEIGHT_RULES: dict[str, Callable[[int, int], int]] = {
    "ma": lambda n, k: 1 if k % 4 in (2, 3) else 0,
    "nand": lambda n, k: 1 if k == n else 0,
    "nmaj": lambda n, k: 1 if 2 * k >= n else 0,
}
_MIN_PLAYERS = {"ma": 2, "nand": 1, "nmaj": 1}
_LONG_NAMES = {"ma": "Mermin-Ardehali", "nand": "n-party AND", "nmaj": "n-party MAJORITY"}


def symmetric_builtin_coeffs(game_id: str, n: int) -> SymmetricXorCoeffs:
    """Coefficients of a symmetric builtin without building its ``2^(2n)`` table."""
    try:
        rule = _WEIGHT_RULES[game_id]
    except KeyError:
        raise GameError(f"{game_id!r} is not a symmetric builtin; known: {', '.join(_WEIGHT_RULES)}") from None
    if n < _MIN_PLAYERS[game_id]:
        raise GameError(f"{_LONG_NAMES[game_id]} needs n >= {_MIN_PLAYERS[game_id]}")
    return SymmetricXorCoeffs(n, tuple(1 - 2 * rule(n, k) for k in range(n + 1)))


def _weight_game(game_id: str, n: int) -> Game:
    symmetric_builtin_coeffs(game_id, n)
    return _symmetric_game(n, lambda k: _WEIGHT_RULES[game_id](n, k), f"{game_id}{n}")


def build_ma(n: int) -> Game:
    """Mermin-Ardehali: outputs must XOR to 1 iff the input weight is 2 or 3 mod 4."""
    return _weight_game("ma", n)


def build_ee(m: int) -> Game:
    """EQUAL-EQUAL on m values: outputs equal iff inputs equal."""
    if m < 2:
        raise GameError("EQUAL-EQUAL needs m >= 2")
    parity = 1 - np.eye(m, dtype=np.int8)
    return Game.from_parity(parity, f"ee{m}")


def build_nand(n: int) -> Game:
    """Outputs must XOR to 1 iff every input is 1."""
    return _weight_game("nand", n)


def build_nmaj(n: int) -> Game:
    """Outputs must XOR to 1 iff at least half of the inputs are 1."""
    return _weight_game("nmaj", n)


def build_or_and() -> Game:
    return Game.from_predicate((2, 2), lambda x, a: bool(x[0] or x[1]) == bool(a[0] and a[1]), "orand")


BUILTINS: dict[str, tuple[Callable[..., Game], int]] = {
    "chsh": (build_chsh, 0),
    "ma": (build_ma, 1),
    "ee": (build_ee, 1),
    "nand": (build_nand, 1),
    "nmaj": (build_nmaj, 1),
    "orand": (build_or_and, 0),
}


def builtin(game_id: str, *params: int) -> Game:
    try:
        builder, arity = BUILTINS[game_id]
    except KeyError:
        raise GameError(f"unknown builtin game {game_id!r}; known: {', '.join(BUILTINS)}") from None
    if len(params) != arity:
        raise GameError(f"builtin {game_id!r} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)


def match_builtin(game: Game) -> tuple[str, tuple[int, ...]] | None:
    """Return the builtin (id, params) whose table equals ``game``'s, if any."""
    sizes = game.input_sizes
    n = len(sizes)
    candidates: list[tuple[str, tuple[int, ...]]] = []
    if sizes == (2, 2):
        candidates += [("chsh", ()), ("orand", ())]
    if n == 2 and sizes[0] == sizes[1] >= 2:
        candidates.append(("ee", (sizes[0],)))
    if all(m == 2 for m in sizes):
        if n >= 2:
            candidates.append(("ma", (n,)))
        candidates += [("nand", (n,)), ("nmaj", (n,))]
    for gid, params in candidates:
        if builtin(gid, *params).same_table(game):
            return gid, params
    return None
