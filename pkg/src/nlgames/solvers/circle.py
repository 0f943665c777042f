"""Modulus of a polynomial on the unit circle, and its minimax over weights.

``max_modulus_on_circle`` maximises ``|sum_k g_k z^k|`` over ``|z| = 1`` with a
uniform grid followed by golden-section refinement of every grid local
maximum that could still beat the best grid value.

``minimax_circle`` computes ``min_p max_z |sum_i p_i c_i z^i|`` over the
probability simplex by a cutting-plane (double oracle) loop: the inner
maximiser supplies circle points, the outer LP keeps a polyhedral lower
model of the modulus at those points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from .. import kernels

__all__ = [
    "CirclePoint",
    "MinimaxResult",
    "golden_section_max",
    "circle_modulus",
    "max_modulus_on_circle",
    "local_maxima_on_circle",
    "minimax_circle",
]

TWO_PI = 2.0 * math.pi
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# iterations without the bracket shrinking before the loop gives up; the LP
# tolerances put a floor near 1e-10 on the reachable width
STALL_LIMIT = 20


@dataclass(frozen=True)
class CirclePoint:
    theta: float
    modulus: float

    @property
    def z(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))


def golden_section_max(f: Callable[[float], float], a: float, b: float, xtol: float = 1e-12) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    candidates = [(f(a), a), (fc, c), (fd, d), (f(b), b)]
    fx, x = max(candidates)
    return x, fx


def _coeffs(gamma) -> np.ndarray:
    g = np.asarray(gamma, dtype=np.complex128).ravel()
    if g.size == 0:
        raise ValueError("need at least one coefficient")
    return g


def circle_modulus(gamma, theta: float) -> float:
    g = _coeffs(gamma)
    return float(kernels.circle_moduli(g, np.array([theta]))[0])


def local_maxima_on_circle(gamma, grid: int = 4096, xtol: float = 1e-12) -> list[CirclePoint]:
    """All refined local maxima that can reach the global maximum, best first."""
    g = _coeffs(gamma)
    thetas = np.arange(grid) * (TWO_PI / grid)
    vals = kernels.circle_moduli(g, thetas)
    lipschitz = float(np.sum(np.arange(g.size) * np.abs(g)))
    if lipschitz == 0.0:
        return [CirclePoint(0.0, float(vals[0]))]
    h = TWO_PI / grid
    prev, nxt = np.roll(vals, 1), np.roll(vals, -1)
    peaks = np.flatnonzero((vals > prev) & (vals >= nxt))
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(vals))])
    # Between grid points the modulus exceeds the grid by at most lipschitz * h.
    peaks = peaks[vals[peaks] >= vals.max() - lipschitz * h]

    def f(t):
        return float(kernels.circle_moduli(g, np.array([t]))[0])

    points = []
    for j in peaks:
        t, val = golden_section_max(f, thetas[j] - h, thetas[j] + h, xtol)
        if val < vals[j]:
            t, val = thetas[j], float(vals[j])
        points.append(CirclePoint(float(t % TWO_PI), float(val)))
    points.sort(key=lambda p: (-p.modulus, p.theta))
    return points


def max_modulus_on_circle(gamma, grid: int = 4096, xtol: float = 1e-12) -> CirclePoint:
    """Global maximum of ``|sum_k gamma_k e^{i k theta}|`` over theta."""
    return local_maxima_on_circle(gamma, grid, xtol)[0]


@dataclass(frozen=True)
class MinimaxResult:
    """Bracket ``lower <= min_p max_z |...| <= upper``; ``value`` is ``upper``.

    ``p`` attains ``upper``; ``points`` are the circle points used as cuts.
    """

    value: float
    lower: float
    upper: float
    p: tuple[float, ...]
    points: tuple[CirclePoint, ...]
    iterations: int
    converged: bool


def _cut_rows(c: np.ndarray, theta: float, phis: Sequence[float]) -> np.ndarray:
    k = np.arange(c.size)
    phis = np.asarray(phis, dtype=float)
    rows = c[None, :] * np.cos(k[None, :] * theta - phis[:, None])
    return np.hstack([rows, -np.ones((phis.size, 1))])


def minimax_circle(
    c: Sequence[int],
    tol: float = 1e-6,
    rotations: int = 64,
    grid: int = 4096,
    max_iter: int = 10000,
) -> MinimaxResult:
    """Least favourable Hamming-weight distribution for sign pattern ``c``.

    Each circle point ``z`` contributes the constraints
    ``Re(e^{-i phi} sum_i p_i c_i z^i) <= t`` for ``rotations`` equally spaced
    phases plus the phase of the current optimiser at ``z``.  The LP optimum
    is a lower bound on the minimax value; the circle maximum at the LP
    minimiser is an upper bound.  Stops once they are within ``tol``, or
    unconverged after ``STALL_LIMIT`` iterations without progress.
    """
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        raise ValueError("need at least one coefficient")
    n1 = c.size
    base_phis = np.arange(rotations) * (TWO_PI / rotations)
    cost = np.zeros(n1 + 1)
    cost[-1] = 1.0
    A_eq = np.ones((1, n1 + 1))
    A_eq[0, -1] = 0.0
    bounds = [(0.0, None)] * n1 + [(None, None)]
    options = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}

    start = [TWO_PI * j / (2 * n1) for j in range(2 * n1)]
    points = [CirclePoint(t, 0.0) for t in start]
    blocks = [_cut_rows(c, t, base_phis) for t in start]

    lower, upper = -math.inf, math.inf
    best_gap, stalled = math.inf, 0
    best_p = np.full(n1, 1.0 / n1)
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        A_ub = np.vstack(blocks)
        res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(A_ub.shape[0]), A_eq=A_eq, b_eq=[1.0],
                      bounds=bounds, method="highs", options=options)
        if res.status != 0:
            break
        lower = max(lower, float(res.fun))
        p = np.clip(res.x[:n1], 0.0, None)
        p /= p.sum()
        peaks = local_maxima_on_circle(p * c, grid)
        if peaks[0].modulus < upper:
            upper, best_p = peaks[0].modulus, p
        if upper - lower <= tol:
            converged = True
            break
        if upper - lower < best_gap * (1 - 1e-6):
            best_gap, stalled = upper - lower, 0
        else:
            stalled += 1
            if stalled >= STALL_LIMIT:
                break
        w_coeffs = p * c
        for pt in peaks:
            if pt.modulus <= lower + tol / 10:
                continue
            w = complex(np.polyval(w_coeffs[::-1], pt.z))
            phis = np.append(base_phis, math.atan2(w.imag, w.real))
            blocks.append(_cut_rows(c, pt.theta, phis))
            points.append(pt)
    return MinimaxResult(
        value=upper,
        lower=lower,
        upper=upper,
        p=tuple(float(v) for v in best_p),
        points=tuple(points),
        iterations=it,
        converged=converged,
    )
