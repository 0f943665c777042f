"""Unit-vector alternating ascent for two-player XOR correlation values.

Maximises ``sum_{x,y} G[x, y] <u_x, v_y>`` over unit vectors.  With the
``v`` fixed, the best ``u_x`` is the normalised ``sum_y G[x, y] v_y`` (and
symmetrically), so alternating the two closed-form updates never decreases
the objective.  The result is a lower bound on the Tsirelson value.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = ["VectorStrategy", "AscentResult", "alternating_ascent", "vector_value"]

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class VectorStrategy:
    """Rows of ``u`` answer the first player's inputs, rows of ``v`` the second's."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        v = np.array(self.v, dtype=float)
        if u.ndim != 2 or v.ndim != 2 or u.shape[1] != v.shape[1]:
            raise ValueError("u and v must be 2-D with a common dimension")
        norms = np.concatenate([np.linalg.norm(u, axis=1), np.linalg.norm(v, axis=1)])
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValueError("strategy vectors must have unit norm")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def d(self) -> int:
        return self.u.shape[1]

    def correlations(self) -> np.ndarray:
        """``E[(-1)^(a xor b) | x, y]`` for every input pair."""
        return self.u @ self.v.T


@dataclass(frozen=True)
class AscentResult:
    value: float
    strategy: VectorStrategy
    degenerate: bool = False
    iterations: int = 0


def vector_value(G: np.ndarray, s: VectorStrategy) -> float:
    return float(np.sum(G * s.correlations()))


def _normalise_rows(M: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(M, axis=1)
    out = fallback.copy()
    ok = norms > 0
    out[ok] = M[ok] / norms[ok, None]
    return out


def _unit_rows(rng: np.random.Generator, k: int, d: int) -> np.ndarray:
    while True:
        M = rng.uniform(-1.0, 1.0, size=(k, d))
        norms = np.linalg.norm(M, axis=1)
        if np.all(norms > 1e-8):
            return M / norms[:, None]


def _one_run(G: np.ndarray, d: int, seed: np.random.SeedSequence, tol: float, max_iter: int):
    rng = np.random.default_rng(seed)
    u = _unit_rows(rng, G.shape[0], d)
    v = _unit_rows(rng, G.shape[1], d)
    value = float(np.sum(G * (u @ v.T)))
    it = 0
    for it in range(1, max_iter + 1):
        u = _normalise_rows(G @ v, u)
        v = _normalise_rows(G.T @ u, v)
        new = float(np.sum(G * (u @ v.T)))
        improvement = new - value
        value = max(value, new)
        if improvement < tol:
            break
    # re-normalise to remove drift before freezing
    u /= np.linalg.norm(u, axis=1)[:, None]
    v /= np.linalg.norm(v, axis=1)[:, None]
    return float(np.sum(G * (u @ v.T))), u, v, it


def alternating_ascent(
    G,
    d: int | None = None,
    restarts: int = 8,
    *,
    seed: int,
    tol: float = 1e-10,
    max_iter: int = 10000,
    threads: int = 1,
) -> AscentResult:
    """Best of ``restarts`` seeded ascents; ``d`` defaults to ``|X| + |Y|``.

    Restart ``k`` always uses the ``k``-th child of ``SeedSequence(seed)``,
    so the result does not depend on ``threads``.
    """
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.size == 0:
        raise ValueError("G must be a non-empty matrix")
    if d is None:
        d = G.shape[0] + G.shape[1]
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if not np.any(G):
        e = np.zeros(d)
        e[0] = 1.0
        s = VectorStrategy(np.tile(e, (G.shape[0], 1)), np.tile(e, (G.shape[1], 1)))
        return AscentResult(0.0, s, degenerate=True)
    seeds = np.random.SeedSequence(seed).spawn(max(1, restarts))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            runs = list(pool.map(lambda ss: _one_run(G, d, ss, tol, max_iter), seeds))
    else:
        runs = [_one_run(G, d, ss, tol, max_iter) for ss in seeds]
    # max by value; earliest restart wins ties
    best = max(range(len(runs)), key=lambda k: (runs[k][0], -k))
    value, u, v, it = runs[best]
    return AscentResult(value, VectorStrategy(u, v), degenerate=False, iterations=it)
