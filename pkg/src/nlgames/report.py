"""JSON report envelope.

Every number is tagged: ``{"exact": "p/q"}`` for rationals and
``{"float": x, "tol": t}`` for binary64 results.  Keys are sorted and no
timestamp is written, so the same command and seed give identical bytes.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import numpy as np

from .game import Distribution, Game, MixedStrategy, match_builtin
from .noshared import ProductStrategy
from .solvers import VectorStrategy

__all__ = ["SCHEMA_VERSION", "VERSION", "number", "game_descriptor", "certificate", "envelope", "dumps", "load_schema"]

SCHEMA_VERSION = 1
VERSION = "0.1.0"
DEFAULT_FLOAT_TOL = 1e-9


def number(v, tol: float = DEFAULT_FLOAT_TOL) -> dict | None:
    if v is None:
        return None
    if isinstance(v, (Fraction, int, np.integer)) and not isinstance(v, bool):
        q = Fraction(int(v)) if not isinstance(v, Fraction) else v
        return {"exact": f"{q.numerator}/{q.denominator}"}
    return {"float": float(v), "tol": float(tol)}


def game_descriptor(game: Game) -> dict:
    ref = match_builtin(game)
    return {
        "name": game.name,
        "players": game.n_players,
        "inputs": list(game.input_sizes),
        "builtin": None if ref is None else ",".join([ref[0], *map(str, ref[1])]),
    }


def _one_based(x) -> list[int]:
    return [int(v) + 1 for v in x]


def certificate(obj, tol: float = DEFAULT_FLOAT_TOL):
    """JSON form of a strategy or distribution; inputs are 1-based as in files."""
    if obj is None:
        return None
    if isinstance(obj, MixedStrategy):
        return {
            "kind": "mixed",
            "components": [
                {"weight": number(w), "answers": ["".join(map(str, row)) for row in s.tables]} for w, s in obj
            ],
        }
    if isinstance(obj, Distribution):
        return {"kind": "distribution", "rows": [{"input": _one_based(x), "p": number(w, tol)} for x, w in obj.items()]}
    if isinstance(obj, ProductStrategy):
        return {"kind": "product", "q": [[number(v, tol) for v in row] for row in obj.q]}
    if isinstance(obj, VectorStrategy):
        return {"kind": "vectors", "u": obj.u.tolist(), "v": obj.v.tolist()}
    if isinstance(obj, str):
        return {"kind": "tag", "text": obj}
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def envelope(command: str, **fields) -> dict:
    out = {"schema": SCHEMA_VERSION, "tool": {"name": "nlgames", "version": VERSION}, "command": command}
    out.update(fields)
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("nlgames").joinpath("report_schema.json").read_text())
