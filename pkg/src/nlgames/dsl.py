"""The ``.nlg`` text format for games, distributions and mixed strategies.

One directive per line, ``#`` starts a comment::

    game chsh-variant
    players 2
    inputs 2 2
    win 1 1 : 0          # XOR games: winning value of a_1 ^ ... ^ a_n
    ...
    table 1 1 0 1 : -1   # any game: inputs, answers, payoff
    builtin ee 6         # instead of rows
    dist 1 2 : 1/21
    strategy 1/4 01 10   # weight, then one answer string per player

Inputs are 1-based in files and 0-based in memory.  Probabilities and
weights must be written as integers or ``p/q``; decimals are refused so
exact pipelines are never fed rounded numbers.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .game import (
    BUILTINS,
    DeterministicStrategy,
    Distribution,
    Game,
    GameError,
    MixedStrategy,
    builtin,
    is_xor_game,
    match_builtin,
    xor_view,
)

__all__ = [
    "DslError",
    "DslSyntaxError",
    "ArityMismatch",
    "MissingRows",
    "DistributionNotNormalized",
    "ValueOutOfRange",
    "GameDocument",
    "parse_game",
    "serialize_game",
    "parse_distribution",
    "load_game_file",
]


class DslError(GameError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column, self.detail = line, column, message
        where = f"line {line}" + (f", column {column}" if column else "") + ": " if line else ""
        super().__init__(where + message)


class DslSyntaxError(DslError):
    pass


class ArityMismatch(DslError):
    pass


class MissingRows(DslError):
    """Incomplete or duplicated table rows."""


class DistributionNotNormalized(DslError):
    pass


class ValueOutOfRange(DslError):
    pass


@dataclass(frozen=True)
class GameDocument:
    game: Game
    distribution: Distribution | None = None
    strategy: MixedStrategy | None = None
    builtin_ref: tuple[str, tuple[int, ...]] | None = None

    def __iter__(self):
        yield self.game
        yield self.distribution
        yield self.strategy


_TOKEN = re.compile(r":|[^\s:]+")
_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?$")
_INT = re.compile(r"[+-]?\d+$")


@dataclass
class _Tok:
    text: str
    col: int


@dataclass
class _Line:
    no: int
    keyword: _Tok
    args: list[_Tok]

    def split_colon(self) -> tuple[list[_Tok], _Tok]:
        colons = [i for i, t in enumerate(self.args) if t.text == ":"]
        if len(colons) != 1:
            raise DslSyntaxError(f"'{self.keyword.text}' rows need exactly one ':'", self.no, self.keyword.col)
        i = colons[0]
        right = self.args[i + 1:]
        if len(right) != 1:
            col = right[1].col if right else self.args[i].col
            raise DslSyntaxError("expected a single value after ':'", self.no, col)
        return self.args[:i], right[0]


def _tokenize(text: str) -> list[_Line]:
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [_Tok(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if toks:
            lines.append(_Line(no, toks[0], toks[1:]))
    return lines


def _int(tok: _Tok, line: int) -> int:
    if not _INT.match(tok.text):
        raise DslSyntaxError(f"expected an integer, got {tok.text!r}", line, tok.col)
    return int(tok.text)


def _rational(tok: _Tok, line: int) -> Fraction:
    if not _RATIONAL.match(tok.text):
        hint = "; decimals are not accepted, write p/q" if re.match(r"[+-]?\d*\.\d*", tok.text) else ""
        raise DslSyntaxError(f"expected a rational p/q, got {tok.text!r}{hint}", line, tok.col)
    try:
        value = Fraction(tok.text)
    except ZeroDivisionError:
        raise ValueOutOfRange("zero denominator", line, tok.col) from None
    if not 0 <= value <= 1:
        raise ValueOutOfRange(f"probability {value} outside [0, 1]", line, tok.col)
    return value


def _inputs(toks: list[_Tok], sizes: tuple[int, ...], line: int) -> tuple[int, ...]:
    out = []
    for tok, m in zip(toks, sizes):
        v = _int(tok, line)
        if not 1 <= v <= m:
            raise ValueOutOfRange(f"input {v} outside 1..{m}", line, tok.col)
        out.append(v - 1)
    return tuple(out)


def _bits(tok: _Tok, line: int) -> tuple[int, ...]:
    if not re.fullmatch(r"[01]+", tok.text):
        raise DslSyntaxError(f"expected a string of 0/1 answers, got {tok.text!r}", line, tok.col)
    return tuple(int(ch) for ch in tok.text)


_HEADERS = ("game", "players", "inputs", "builtin")
_ROWS = ("win", "table", "dist", "strategy")


def parse_game(text: str) -> GameDocument:
    """Parse ``.nlg`` text.  Errors carry 1-based line and column."""
    lines = _tokenize(text)
    head: dict[str, _Line] = {}
    rows: dict[str, list[_Line]] = {k: [] for k in _ROWS}
    for ln in lines:
        kw = ln.keyword.text
        if kw in _HEADERS:
            if kw in head:
                raise DslSyntaxError(f"duplicate '{kw}' line (first on line {head[kw].no})", ln.no, ln.keyword.col)
            head[kw] = ln
        elif kw in rows:
            rows[kw].append(ln)
        else:
            raise DslSyntaxError(f"unknown directive {kw!r}", ln.no, ln.keyword.col)

    name = ""
    if "game" in head:
        ln = head["game"]
        if len(ln.args) != 1:
            raise DslSyntaxError("'game' takes one name", ln.no, ln.keyword.col)
        name = ln.args[0].text

    ref_game, ref = None, None
    if "builtin" in head:
        ln = head["builtin"]
        if not ln.args:
            raise DslSyntaxError("'builtin' needs an id", ln.no, ln.keyword.col)
        gid = ln.args[0].text
        if gid not in BUILTINS:
            raise DslSyntaxError(f"unknown builtin {gid!r}; known: {', '.join(BUILTINS)}", ln.no, ln.args[0].col)
        params = tuple(_int(t, ln.no) for t in ln.args[1:])
        if len(params) != BUILTINS[gid][1]:
            raise ArityMismatch(f"builtin {gid!r} takes {BUILTINS[gid][1]} parameter(s)", ln.no, ln.args[0].col)
        try:
            ref_game = builtin(gid, *params)
        except GameError as exc:
            raise ValueOutOfRange(str(exc), ln.no, ln.args[0].col) from None
        ref = (gid, params)
        if rows["win"] or rows["table"]:
            bad = (rows["win"] + rows["table"])[0]
            raise DslSyntaxError("'builtin' games take no win/table rows", bad.no, bad.keyword.col)

    sizes = _header_sizes(head, ref_game)
    if ref_game is not None:
        game = Game(ref_game.input_sizes, ref_game.table, name or ref_game.name)
    else:
        game = _game_from_rows(rows, sizes, name, head)
    dist = _parse_dist(rows["dist"], sizes)
    strategy = _parse_strategy(rows["strategy"], sizes)
    return GameDocument(game, dist, strategy, ref)


def _header_sizes(head: dict[str, _Line], ref_game: Game | None) -> tuple[int, ...]:
    n = None
    if "players" in head:
        ln = head["players"]
        if len(ln.args) != 1:
            raise DslSyntaxError("'players' takes one count", ln.no, ln.keyword.col)
        n = _int(ln.args[0], ln.no)
        if n < 1:
            raise ValueOutOfRange("need at least one player", ln.no, ln.args[0].col)
    sizes = None
    if "inputs" in head:
        ln = head["inputs"]
        sizes = tuple(_int(t, ln.no) for t in ln.args)
        for t, m in zip(ln.args, sizes):
            if m < 1:
                raise ValueOutOfRange("input alphabets need at least one symbol", ln.no, t.col)
        if n is not None and len(sizes) != n:
            raise ArityMismatch(f"{len(sizes)} input sizes for {n} players", ln.no, ln.keyword.col)
    if ref_game is not None:
        if n is not None and n != ref_game.n_players:
            ln = head["players"]
            raise ArityMismatch(f"builtin has {ref_game.n_players} players, header says {n}", ln.no, ln.args[0].col)
        if sizes is not None and sizes != ref_game.input_sizes:
            ln = head["inputs"]
            raise ArityMismatch(f"builtin has inputs {ref_game.input_sizes}, header says {sizes}", ln.no, ln.keyword.col)
        return ref_game.input_sizes
    if sizes is None:
        raise DslSyntaxError("missing 'inputs' line", None)
    return sizes


def _game_from_rows(rows, sizes, name, head) -> Game:
    n = len(sizes)
    if rows["win"] and rows["table"]:
        bad = rows["table"][0]
        raise DslSyntaxError("mix of 'win' and 'table' rows", bad.no, bad.keyword.col)
    if rows["win"]:
        parity = np.full(sizes, -1, dtype=np.int8)
        for ln in rows["win"]:
            left, right = ln.split_colon()
            if len(left) != n:
                raise ArityMismatch(f"'win' row has {len(left)} inputs for {n} players", ln.no, ln.keyword.col)
            x = _inputs(left, sizes, ln.no)
            p = _int(right, ln.no)
            if p not in (0, 1):
                raise ValueOutOfRange(f"winning parity must be 0 or 1, got {p}", ln.no, right.col)
            if parity[x] >= 0:
                raise MissingRows(f"duplicate row for input {_one_based(x)}", ln.no, ln.keyword.col)
            parity[x] = p
        _check_total(parity < 0, rows["win"][-1].no)
        return Game.from_parity(parity, name)
    if rows["table"]:
        table = np.zeros(sizes + (2,) * n, dtype=np.int8)
        for ln in rows["table"]:
            left, right = ln.split_colon()
            if len(left) != 2 * n:
                raise ArityMismatch(f"'table' row needs {n} inputs and {n} answers", ln.no, ln.keyword.col)
            x = _inputs(left[:n], sizes, ln.no)
            a = []
            for t in left[n:]:
                v = _int(t, ln.no)
                if v not in (0, 1):
                    raise ValueOutOfRange(f"answers are 0 or 1, got {v}", ln.no, t.col)
                a.append(v)
            v = _int(right, ln.no)
            if v not in (1, -1):
                raise ValueOutOfRange(f"payoff must be +1 or -1, got {right.text}", ln.no, right.col)
            if table[x + tuple(a)]:
                raise MissingRows(f"duplicate row for input {_one_based(x)}, answers {a}", ln.no, ln.keyword.col)
            table[x + tuple(a)] = v
        _check_total(table == 0, rows["table"][-1].no)
        return Game(sizes, table, name)
    raise MissingRows("no 'builtin', 'win' or 'table' rows", max((h.no for h in head.values()), default=None))


def _check_total(missing: np.ndarray, line: int):
    if missing.any():
        idx = tuple(int(v) for v in np.argwhere(missing)[0])
        raise MissingRows(f"{int(missing.sum())} row(s) missing, first at {_one_based(idx)}", line)


def _one_based(x) -> str:
    return " ".join(str(v + 1) for v in x)


def _parse_dist(lines: list[_Line], sizes) -> Distribution | None:
    if not lines:
        return None
    weights: dict[tuple[int, ...], Fraction] = {}
    for ln in lines:
        left, right = ln.split_colon()
        if len(left) != len(sizes):
            raise ArityMismatch(f"'dist' row has {len(left)} inputs for {len(sizes)} players", ln.no, ln.keyword.col)
        x = _inputs(left, sizes, ln.no)
        if x in weights:
            raise DslSyntaxError(f"duplicate 'dist' row for input {_one_based(x)}", ln.no, ln.keyword.col)
        weights[x] = _rational(right, ln.no)
    total = sum(weights.values())
    if total != 1:
        raise DistributionNotNormalized(f"'dist' rows sum to {total}, not 1", lines[-1].no)
    return Distribution(weights)


def _parse_strategy(lines: list[_Line], sizes) -> MixedStrategy | None:
    if not lines:
        return None
    comps = []
    for ln in lines:
        if not ln.args:
            raise DslSyntaxError("'strategy' needs a weight and answer strings", ln.no, ln.keyword.col)
        w = _rational(ln.args[0], ln.no)
        tables = ln.args[1:]
        if len(tables) != len(sizes):
            raise ArityMismatch(f"{len(tables)} answer strings for {len(sizes)} players", ln.no, ln.keyword.col)
        bits = []
        for t, m in zip(tables, sizes):
            b = _bits(t, ln.no)
            if len(b) != m:
                raise ArityMismatch(f"answer string of length {len(b)} for {m} inputs", ln.no, t.col)
            bits.append(b)
        comps.append((w, DeterministicStrategy(tuple(bits))))
    total = sum(w for w, _ in comps)
    if total != 1:
        raise DistributionNotNormalized(f"strategy weights sum to {total}, not 1", lines[-1].no)
    return MixedStrategy(tuple(comps))


def parse_distribution(text: str, input_sizes) -> Distribution:
    """Parse a file holding only ``dist`` rows (and comments) for a game of the given shape."""
    lines = _tokenize(text)
    for ln in lines:
        if ln.keyword.text != "dist":
            raise DslSyntaxError(f"only 'dist' rows are allowed here, got {ln.keyword.text!r}", ln.no, ln.keyword.col)
    dist = _parse_dist(lines, tuple(input_sizes))
    if dist is None:
        raise MissingRows("no 'dist' rows")
    return dist


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def serialize_game(game: Game, dist: Distribution | None = None, strategy: MixedStrategy | None = None) -> str:
    """Canonical text: a builtin reference when the table is a builtin's,
    otherwise rows in lexicographic input order."""
    if game.name and not re.fullmatch(r"[^\s#:]+", game.name):
        raise GameError(f"game name {game.name!r} cannot be written (whitespace, '#' or ':')")
    out = []
    ref = match_builtin(game)
    # a builtin's own name is implied by the builtin line
    if game.name and (ref is None or game.name != builtin(ref[0], *ref[1]).name):
        out.append(f"game {game.name}")
    out.append(f"players {game.n_players}")
    out.append("inputs " + " ".join(map(str, game.input_sizes)))
    if ref is not None:
        out.append(" ".join(["builtin", ref[0], *map(str, ref[1])]))
    elif is_xor_game(game):
        parity = xor_view(game).parity_table
        for x in game.inputs():
            out.append(f"win {_one_based(x)} : {0 if parity[x] == 1 else 1}")
    else:
        for x in game.inputs():
            for a in itertools.product((0, 1), repeat=game.n_players):
                v = game.value(x, a)
                out.append(f"table {_one_based(x)} {' '.join(map(str, a))} : {'+1' if v > 0 else '-1'}")
    if dist is not None:
        if not dist.exact:
            raise GameError("only exact (rational) distributions can be written")
        dist.check_shape(game.input_sizes)
        for x, w in dist.items():
            out.append(f"dist {_one_based(x)} : {_fmt(w)}")
    if strategy is not None:
        if strategy.input_sizes != game.input_sizes:
            raise GameError("strategy shape does not match the game")
        for w, s in strategy:
            out.append(f"strategy {_fmt(w)} " + " ".join("".join(map(str, row)) for row in s.tables))
    return "\n".join(out) + "\n"


def load_game_file(path) -> GameDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read())
