"""Exact solution of finite two-player zero-sum matrix games.

Small games go straight to a rational simplex with Bland's rule.  Large
games (the strategies x inputs matrices of classical worst-case analysis)
are first solved in floating point.  The exact value and mixes are then
recovered from the float vertex (its supports and tight constraints) and
checked exactly against the full matrix.  If recovery fails, the exact
simplex runs on a growing submatrix until its certificate holds for the
whole matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

__all__ = ["ZeroSumSolution", "solve_zero_sum", "EmptyMatrix"]

DIRECT_CELLS = 4096
_ADD_PER_ROUND = 16


class EmptyMatrix(ValueError):
    pass


@dataclass(frozen=True)
class ZeroSumSolution:
    """Minimax value with optimal mixes; rows maximise, columns minimise."""

    value: Fraction
    row_mix: tuple[Fraction, ...]
    col_mix: tuple[Fraction, ...]

    def verify(self, payoff) -> bool:
        """Exact check that both mixes guarantee ``value``."""
        M, scale = _integer_matrix(payoff)
        v = self.value * scale
        w = _support(self.row_mix)
        y = _support(self.col_mix)
        if sum(self.row_mix) != 1 or sum(self.col_mix) != 1:
            return False
        if any(p < 0 for p in self.row_mix + self.col_mix):
            return False
        col_pay = _exact_combination(M[list(w)].T, list(w.values()))
        row_pay = _exact_combination(M[:, list(y)], list(y.values()))
        return min(col_pay) == v == max(row_pay)


def _support(mix) -> dict[int, Fraction]:
    return {i: p for i, p in enumerate(mix) if p}


def _integer_matrix(payoff) -> tuple[np.ndarray, int]:
    """Return ``(M, scale)`` with integer ``M`` and ``payoff == M / scale``."""
    if isinstance(payoff, np.ndarray) and payoff.dtype.kind in "iu":
        M = payoff.astype(np.int64)
        scale = 1
    else:
        rows = [[Fraction(v) for v in row] for row in payoff]
        if not rows or not rows[0]:
            raise EmptyMatrix("payoff matrix is empty")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("payoff matrix is ragged")
        scale = math.lcm(*(v.denominator for r in rows for v in r))
        ints = [[int(v * scale) for v in r] for r in rows]
        big = max(abs(v) for r in ints for v in r)
        M = np.array(ints, dtype=np.int64 if big < 2**40 else object)
    if M.ndim != 2 or 0 in M.shape:
        raise EmptyMatrix("payoff matrix is empty")
    return M, scale


def _exact_combination(M: np.ndarray, weights: Sequence[Fraction]) -> list[Fraction]:
    """``M @ weights`` in exact arithmetic."""
    den = math.lcm(*(w.denominator for w in weights)) if weights else 1
    ints = [int(w * den) for w in weights]
    bound = int(np.abs(M).max()) * sum(abs(i) for i in ints) if M.size else 0
    if bound < 2**62 and M.dtype != object:
        prod = M @ np.array(ints, dtype=np.int64)
    else:
        prod = M.astype(object) @ np.array(ints, dtype=object)
    return [Fraction(int(p), den) for p in prod]


def _bland_simplex(M: list[list[int]]) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Solve the game with integer payoff ``M`` exactly.

    After shifting payoffs to be >= 1, the column player's problem becomes
    ``max sum z  s.t.  M' z <= 1, z >= 0`` whose optimum is ``1 / value'``;
    the row mix is read off the slack reduced costs.

    The tableau is kept integer (fraction-free pivoting): the true tableau
    is ``T / den`` where ``den`` is the last pivot element, and every update
    ``(T_ij * p - T_ic * T_rj) / den`` divides exactly.
    """
    m, n = len(M), len(M[0])
    shift = 1 - min(min(r) for r in M)
    width = n + m + 1
    rhs = width - 1
    T = []
    for i, row in enumerate(M):
        line = [v + shift for v in row] + [0] * m + [1]
        line[n + i] = 1
        T.append(line)
    obj = [-1] * n + [0] * (m + 1)
    basis = [n + i for i in range(m)]
    den = 1

    while True:
        # Bland: lowest-index improving column, lowest-index basic variable on ties.
        enter = next((j for j in range(rhs) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                if leave is None:
                    leave = i
                    continue
                lhs = T[i][rhs] * T[leave][enter]
                cur = T[leave][rhs] * a
                if lhs < cur or (lhs == cur and basis[i] < basis[leave]):
                    leave = i
        # M' > 0 keeps the problem bounded, so a leaving row always exists.
        prow = T[leave]
        piv = prow[enter]
        for i in range(m):
            if i == leave:
                continue
            row = T[i]
            f = row[enter]
            if f:
                for j in range(width):
                    row[j] = (row[j] * piv - f * prow[j]) // den
            elif piv != den:
                for j in range(width):
                    if row[j]:
                        row[j] = row[j] * piv // den
        f = obj[enter]
        for j in range(width):
            obj[j] = (obj[j] * piv - f * prow[j]) // den
        den = piv
        basis[leave] = enter

    total = Fraction(obj[rhs], den)
    value_shifted = 1 / total
    z = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            z[b] = Fraction(T[i][rhs], den)
    col = [zj * value_shifted for zj in z]
    row = [Fraction(obj[n + i], den) * value_shifted for i in range(m)]
    return value_shifted - shift, row, col


def _solve_direct(M: np.ndarray) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    m, n = M.shape
    rows = [[int(v) for v in r] for r in M]
    if m > n:
        # Fewer constraints in the tableau: let the column player maximise -M^T.
        neg_t = [[-rows[i][j] for i in range(m)] for j in range(n)]
        v, row, col = _bland_simplex(neg_t)
        return -v, col, row
    return _bland_simplex(rows)


def _float_guess(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m, n = M.shape
    A = np.asarray(M, dtype=float)
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([A, -np.ones((m, 1))])
    A_eq = np.ones((1, n + 1))
    A_eq[0, -1] = 0.0
    res = linprog(
        c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=[1.0],
        bounds=[(0, None)] * n + [(None, None)], method="highs",
    )
    if res.status != 0:
        return np.full(m, 1.0 / m), np.full(n, 1.0 / n)
    return -res.ineqlin.marginals, res.x[:n]


def _exact_unique_solution(rows: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Unique solution of an (over)determined consistent system, else None."""
    A = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    n = len(A[0]) - 1
    pivots = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(A)) if A[i][c]), None)
        if k is None:
            return None
        A[r], A[k] = A[k], A[r]
        piv = A[r][c]
        A[r] = [v / piv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    if any(A[i][n] for i in range(r, len(A))):
        return None
    return [A[i][n] for i in range(n)]


def _recover_vertex(M: np.ndarray, w_f: np.ndarray, y_f: np.ndarray):
    """Exact mixes on the float solution's supports and tight constraints."""
    A = np.asarray(M, dtype=float)
    scale = max(1.0, float(np.abs(A).max()))
    row_pay, col_pay = A @ y_f, w_f @ A
    tight_rows = np.flatnonzero(row_pay >= row_pay.max() - 1e-9 * scale)
    tight_cols = np.flatnonzero(col_pay <= col_pay.min() + 1e-9 * scale)
    R = np.flatnonzero(w_f > 1e-9)
    C = np.flatnonzero(y_f > 1e-9)
    # unknowns (y_C, v): M_TC y - v = 0, sum y = 1
    eqs = [[int(M[i, j]) for j in C] + [-1] for i in tight_rows] + [[1] * len(C) + [0]]
    y = _exact_unique_solution(eqs, [0] * len(tight_rows) + [1])
    eqs = [[int(M[i, j]) for i in R] + [-1] for j in tight_cols] + [[1] * len(R) + [0]]
    w = _exact_unique_solution(eqs, [0] * len(tight_cols) + [1])
    if y is None or w is None or y[-1] != w[-1]:
        return None
    v = y[-1]
    ys, ws = dict(zip(C.tolist(), y[:-1])), dict(zip(R.tolist(), w[:-1]))
    if any(p < 0 for p in ys.values()) or any(p < 0 for p in ws.values()):
        return None
    return v, ws, ys


def _certificate_violations(M: np.ndarray, v: Fraction, w: dict, y: dict):
    col_pay = _exact_combination(M[list(w)].T, list(w.values()))
    row_pay = _exact_combination(M[:, list(y)], list(y.values()))
    bad_cols = [j for j in np.argsort([float(p) for p in col_pay], kind="stable") if col_pay[j] < v]
    bad_rows = [i for i in np.argsort([-float(p) for p in row_pay], kind="stable") if row_pay[i] > v]
    return bad_rows, bad_cols


def _solve_restricted(M: np.ndarray) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    m, n = M.shape
    w_f, y_f = _float_guess(M)
    found = _recover_vertex(M, w_f, y_f)
    if found is not None and _certificate_violations(M, *found) == ([], []):
        v, w, y = found
    else:
        rows = sorted(set(np.flatnonzero(w_f > 1e-9)) | {int(np.argmax(w_f))})
        cols = sorted(set(np.flatnonzero(y_f > 1e-9)) | {int(np.argmax(y_f))})
        while True:
            v, w_sub, y_sub = _solve_direct(M[np.ix_(rows, cols)])
            w = {r: p for r, p in zip(rows, w_sub) if p}
            y = {c: p for c, p in zip(cols, y_sub) if p}
            bad_rows, bad_cols = _certificate_violations(M, v, w, y)
            if not bad_cols and not bad_rows:
                break
            rows = sorted(set(rows) | {int(i) for i in bad_rows[:_ADD_PER_ROUND]})
            cols = sorted(set(cols) | {int(j) for j in bad_cols[:_ADD_PER_ROUND]})
    row = [Fraction(0)] * m
    col = [Fraction(0)] * n
    for r, p in w.items():
        row[r] = p
    for c, p in y.items():
        col[c] = p
    return v, row, col


def _dedupe(M: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Unique rows (axis 0) or columns (axis 1), keeping first occurrences in order."""
    _, first = np.unique(M, axis=axis, return_index=True)
    first = np.sort(first)
    return (M[first] if axis == 0 else M[:, first]), first


def solve_zero_sum(payoff) -> ZeroSumSolution:
    """Exact minimax value and optimal mixes of a rational matrix game.

    ``payoff`` is a 2-D array of ints or a nested sequence of ints/Fractions;
    the row player maximises.  The returned mixes are exact and satisfy
    ``ZeroSumSolution.verify``.
    """
    M, scale = _integer_matrix(payoff)
    m, n = M.shape
    R, row_idx = _dedupe(M, 0) if M.dtype != object else (M, np.arange(m))
    R, col_idx = _dedupe(R, 1) if M.dtype != object else (R, np.arange(n))
    if R.size <= DIRECT_CELLS or R.dtype == object:
        v, row_sub, col_sub = _solve_direct(R)
    else:
        v, row_sub, col_sub = _solve_restricted(R)
    row = [Fraction(0)] * m
    col = [Fraction(0)] * n
    for k, p in zip(row_idx, row_sub):
        row[int(k)] = p
    for k, p in zip(col_idx, col_sub):
        col[int(k)] = p
    return ZeroSumSolution(Fraction(v) / scale, tuple(row), tuple(col))
