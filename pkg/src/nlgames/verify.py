"""Table of reference checks run by ``nlgames verify-paper``.

Each check recomputes a published value with the library and compares it
with the closed form at the stated tolerance.  Groups can be selected with
``--only`` (comma separated).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import classical as cl
from . import noshared as ns
from . import quantum as qu
from .game import (
    Distribution,
    MixedStrategy,
    SymmetricDistribution,
    build_chsh,
    build_ee,
    build_ma,
    build_nand,
    build_or_and,
    input_values,
    symmetric_builtin_coeffs,
    symmetric_coeffs,
)

__all__ = ["Check", "CheckResult", "CHECKS", "GROUPS", "run_checks"]

SQRT_HALF = 1 / math.sqrt(2)


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    fn: Callable[[], tuple[bool, str, str]]


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    passed: bool
    computed: str
    expected: str
    seconds: float


CHECKS: list[Check] = []


def _check(group: str, name: str):
    def deco(fn):
        CHECKS.append(Check(group, name, fn))
        return fn

    return deco


def _eq(computed, expected) -> tuple[bool, str, str]:
    return computed == expected, str(computed), str(expected)


def _close(computed, expected, tol) -> tuple[bool, str, str]:
    return abs(float(computed) - float(expected)) <= tol, f"{float(computed):.10g}", f"{float(expected):.10g} +- {tol:g}"


def _classical_worst_rows(group, build, closed, params):
    for p in params:

        @_check(group, f"worst classical value, {group}{p}")
        def _(p=p):
            r = cl.classical_worst(build(p))
            return _eq(r.value, closed(p))


# -- CHSH ----------------------------------------------------------------------------


@_check("chsh", "uniform classical value")
def _():
    return _eq(cl.classical_fixed(build_chsh(), Distribution.uniform((2, 2))).value, Fraction(1, 2))


@_check("chsh", "worst classical value with verified certificates")
def _():
    r = cl.classical_worst(build_chsh())
    ok, c, e = _eq(r.value, Fraction(1, 2))
    return ok and cl.verify_worst_certificate(build_chsh(), r), c, e


@_check("chsh", "four-strategy mix wins 1/2 on every input")
def _():
    vals = set(input_values(build_chsh(), cl.chsh_mix()).values())
    return vals == {Fraction(1, 2)}, ", ".join(map(str, sorted(vals))), "1/2"


@_check("chsh", "worst quantum value (circle minimax)")
def _():
    return _close(qu.quantum_symmetric_worst(symmetric_coeffs(build_chsh())).upper, SQRT_HALF, 1e-5)


@_check("chsh", "vector ascent on uniform inputs")
def _():
    r = qu.quantum_2xor_fixed(build_chsh(), Distribution.uniform((2, 2)), seed=0)
    return r.lower >= SQRT_HALF - 1e-4, f"{r.lower:.10g}", f">= {SQRT_HALF - 1e-4:.10g}"


@_check("chsh", "no deterministic strategy wins every input")
def _():
    verdict = ns.xor_dichotomy(build_chsh())
    return isinstance(verdict, ns.AtMostHalf), type(verdict).__name__, "AtMostHalf"


# -- EQUAL-EQUAL --------------------------------------------------------------------


def _ee_closed(m):
    return Fraction(m, 3 * m - 4) if m % 2 == 0 else Fraction(m + 1, 3 * m - 1)


_classical_worst_rows("ee", build_ee, _ee_closed, range(3, 9))

for _m in (4, 5, 6):

    @_check("ee", f"uniform classical value, ee{_m}")
    def _(m=_m):
        return _eq(cl.classical_fixed(build_ee(m), Distribution.uniform((m, m))).value, Fraction(m - 2, m))


for _m in range(3, 9):

    @_check("ee", f"constructed mix and worst distribution, ee{_m}")
    def _(m=_m):
        v = _ee_closed(m)
        lo = min(input_values(build_ee(m), cl.ee_mix(m)).values())
        hi = cl.classical_fixed(build_ee(m), cl.ee_worst_dist(m)).value
        return lo == v == hi, f"mix >= {lo}, dist caps at {hi}", str(v)


for _m in (4, 6):

    @_check("ee", f"uniform quantum bracket, ee{_m}")
    def _(m=_m):
        r = qu.quantum_2xor_fixed(build_ee(m), Distribution.uniform((m, m)), seed=0)
        target = (m - 2) / m
        ok = r.lower - 1e-3 <= target <= float(r.upper) + 1e-3
        return ok, f"[{float(r.lower):.8f}, {float(r.upper):.8f}]", f"contains {target:.8f}"


for _m in (4, 5, 6):

    @_check("ee", f"alpha-beta formula against enumeration, ee{_m}")
    def _(m=_m):
        # one beta per regime: the worst-case beta and a small one
        betas = [cl.ee_alpha_beta(m)[1], Fraction(1, 10 * m * m)]
        seen = []
        ok = True
        for beta in betas:
            alpha = (1 - m * (m - 1) * beta) / m
            r = qu.ee_alphabeta_value(m, beta)
            c = cl.classical_fixed(build_ee(m), cl.ee_distribution(m, alpha, beta)).value
            ok &= r.lower <= c <= r.upper
            seen.append(f"{c} in [{r.lower}, {r.upper}]")
        return ok, "; ".join(seen), "classical value inside formula bracket"


# -- n-party AND ----------------------------------------------------------------------


def _nand_closed(n):
    return Fraction(2 ** (n - 2), 3 * 2 ** (n - 2) - 1)


_classical_worst_rows("nand", build_nand, _nand_closed, range(2, 7))

for _n in range(2, 7):

    @_check("nand", f"constructed mix and worst distribution, nand{_n}")
    def _(n=_n):
        v = _nand_closed(n)
        lo = min(input_values(build_nand(n), cl.nand_mix(n)).values())
        hi = cl.classical_fixed(build_nand(n), cl.nand_worst_dist(n)).value
        return lo == v == hi, f"mix >= {lo}, dist caps at {hi}", str(v)


# -- Mermin-Ardehali --------------------------------------------------------------------

for _n in (2, 4):

    @_check("ma", f"worst classical value, ma{_n}")
    def _(n=_n):
        return _close(cl.classical_worst(build_ma(n)).value, 2.0 ** (-n / 2), 1e-12)


for _n in (2, 3, 4, 5):

    @_check("ma", f"worst quantum value, ma{_n}")
    def _(n=_n):
        return _close(qu.quantum_symmetric_worst(symmetric_coeffs(build_ma(n))).upper, SQRT_HALF, 1e-5)


# -- limits -----------------------------------------------------------------------------


def _nand_limit_value(n):
    return qu.quantum_symmetric_fixed(symmetric_builtin_coeffs("nand", n), qu.nand_limit_distribution(n)).upper


def _nmaj_value(k):
    return qu.quantum_symmetric_fixed(symmetric_builtin_coeffs("nmaj", 2 * k - 1), qu.nmaj_distribution(k)).upper


@_check("limits", "n-party AND under the geometric distribution")
def _():
    v = {n: _nand_limit_value(n) for n in (9, 25, 100)}
    ok = v[100] < v[25] < v[9] and min(v.values()) >= 1 / 3 - 1e-9
    return ok, ", ".join(f"v({n})={x:.6f}" for n, x in v.items()), "decreasing, all >= 1/3"


@_check("limits", "n-party MAJORITY under the harmonic distribution")
def _():
    g = {k: _nmaj_value(k) for k in (2, 8, 32)}
    return g[2] > g[8] > g[32], ", ".join(f"g({k})={x:.6f}" for k, x in g.items()), "strictly decreasing"


# -- no shared randomness -------------------------------------------------------------------


@_check("noshared", "OR-AND product value and strategy")
def _():
    r = ns.product_worst(build_or_and())
    p = (math.sqrt(5) - 1) / 2
    ok = abs(r.value - (math.sqrt(5) - 2)) <= 1e-6 and all(abs(row[0] - p) <= 1e-6 for row in r.strategy.q)
    return ok, f"{r.value:.10f} at q={r.strategy.q}", "sqrt(5) - 2 at p=(sqrt(5)-1)/2"


@_check("noshared", "two-colourable XOR game is won deterministically")
def _():
    g = build_ee(2)
    verdict = ns.xor_dichotomy(g)
    if not isinstance(verdict, ns.PerfectDeterministic):
        return False, type(verdict).__name__, "PerfectDeterministic"
    vals = set(input_values(g, MixedStrategy.pure(verdict.strategy)).values())
    return vals == {1}, str(verdict.strategy.tables), "wins every input"


# -- Werner-Wolf -------------------------------------------------------------------------------


@_check("ww", "quantum/classical ratio cap")
def _():
    cases = [("chsh", build_chsh(), 2), ("ma4", build_ma(4), 4), ("ee6", build_ee(6), 2)]
    out, ok = [], True
    for name, g, n in cases:
        dist = Distribution.uniform(g.input_sizes)
        c = cl.classical_fixed(g, dist).value
        if n == 2:
            q = qu.quantum_2xor_fixed(g, dist, seed=0).upper
        else:
            q = qu.quantum_symmetric_fixed(symmetric_coeffs(g), SymmetricDistribution.uniform(n)).upper
        verdict = qu.werner_wolf_check(n, dist, c, q)
        ok &= verdict is not False
        out.append(f"{name}: {float(q) / float(c):.6f}")
    return ok, ", ".join(out), "ratio <= 2^((n-1)/2)"


GROUPS = tuple(dict.fromkeys(c.group for c in CHECKS))


def run_checks(only: set[str] | None = None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        if only and check.group not in only:
            continue
        t0 = time.perf_counter()
        try:
            passed, computed, expected = check.fn()
        except Exception as exc:  # a crashing check is a failed row, not a crashed run
            passed, computed, expected = False, f"error: {exc}", ""
        results.append(CheckResult(check.group, check.name, bool(passed), computed, expected, time.perf_counter() - t0))
    return results
