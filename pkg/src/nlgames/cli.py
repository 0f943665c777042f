"""``nlgames`` command line.

Exit codes: 0 success, 1 input error (or a failed verification row),
2 analysis not supported for this game, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import classical as cl
from . import noshared as ns
from . import quantum as qu
from .dsl import DslError, GameDocument, load_game_file, parse_distribution, parse_game, serialize_game
from .game import (
    BUILTINS,
    Distribution,
    Game,
    GameError,
    NotBinaryInputs,
    NotSymmetric,
    NotXorGame,
    SymmetricDistribution,
    builtin,
    match_builtin,
    symmetric_coeffs,
)
from .report import certificate, dumps, envelope, game_descriptor, number
from .sim import exact_value, simulate
from .verify import GROUPS, run_checks

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_NONCONVERGED = 0, 1, 2, 3

_BUILTIN_HELP = {
    "chsh": "CHSH, 2 players, binary inputs",
    "ma": "Mermin-Ardehali, n players (param n >= 2)",
    "ee": "EQUAL-EQUAL, 2 players with m inputs each (param m >= 2)",
    "nand": "n-party AND, n players (param n >= 1)",
    "nmaj": "n-party MAJORITY, n players (param n >= 1)",
    "orand": "OR-AND, 2 players, binary inputs, not XOR",
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- argument resolution -----------------------------------------------------------


def load_source(source: str) -> GameDocument:
    """``builtin:ee,6`` or a path to a ``.nlg`` file."""
    if source.startswith("builtin:"):
        gid, *params = source[len("builtin:"):].split(",")
        try:
            game = builtin(gid, *(int(p) for p in params))
        except (GameError, ValueError) as exc:
            raise CliError(str(exc), EXIT_INPUT) from None
        return GameDocument(game, builtin_ref=(gid, tuple(int(p) for p in params)))
    try:
        return load_game_file(source)
    except OSError as exc:
        raise CliError(f"cannot read {source}: {exc.strerror}", EXIT_INPUT) from None
    except GameError as exc:
        raise CliError(f"{source}: {exc}", EXIT_INPUT) from None


def resolve_dist(spec: str | None, doc: GameDocument) -> Distribution:
    sizes = doc.game.input_sizes
    if spec is None:
        return doc.distribution if doc.distribution is not None else Distribution.uniform(sizes)
    if spec == "uniform":
        return Distribution.uniform(sizes)
    try:
        if spec.startswith("point:"):
            x = tuple(int(v) - 1 for v in spec[len("point:"):].split(","))
            if len(x) != len(sizes) or not all(0 <= xi < m for xi, m in zip(x, sizes)):
                raise CliError(f"point {spec} does not fit input sizes {sizes} (inputs are 1-based)", EXIT_INPUT)
            return Distribution.point(x)
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except ValueError:
        raise CliError(f"malformed point {spec!r}; expected point:x1,...,xn", EXIT_INPUT) from None
    except OSError as exc:
        raise CliError(f"cannot read {spec}: {exc.strerror}", EXIT_INPUT) from None
    # either a full .nlg document or bare 'dist' rows for this game
    try:
        if _has_game_rows(text):
            parsed = parse_game(text)
            if parsed.distribution is None:
                raise CliError(f"{spec} has no 'dist' rows", EXIT_INPUT)
            if parsed.game.input_sizes != sizes:
                raise CliError(f"{spec} is for inputs {parsed.game.input_sizes}, game has {sizes}", EXIT_INPUT)
            return parsed.distribution
        return parse_distribution(text, sizes)
    except GameError as exc:
        raise CliError(f"{spec}: {exc}", EXIT_INPUT) from None


def _has_game_rows(text: str) -> bool:
    words = (line.split("#", 1)[0].split() for line in text.splitlines())
    return any(w and w[0] in ("builtin", "win", "table") for w in words)


def _mode(analysis: str, setting: str) -> dict:
    randomness = {"classical": "shared", "quantum": "entangled", "no-shared": "none"}[analysis]
    return {"analysis": analysis, "setting": setting, "randomness": randomness}


def _analysis(args) -> str:
    if args.quantum:
        return "quantum"
    if getattr(args, "no_shared", False):
        return "no-shared"
    return "classical"


# -- verbs --------------------------------------------------------------------------


def cmd_value(args) -> tuple[dict, str]:
    doc = load_source(args.game)
    game, dist = doc.game, resolve_dist(args.dist, doc)
    try:
        dist.check_shape(game.input_sizes)
    except GameError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    analysis = _analysis(args)
    tolerances = {}
    if analysis == "classical":
        try:
            r = cl.classical_fixed(game, dist, threads=args.threads)
        except cl.CapExceeded as exc:
            raise CliError(str(exc), EXIT_UNSUPPORTED) from None
        result = {"value": number(r.value), "lower": number(r.value), "upper": number(r.value),
                  "win_probability": number(r.win_probability)}
        certs = {"strategy": certificate(r.certificate_strategy), "distribution": certificate(dist)}
        method, note = r.method, r.note
        text = f"omega_c = {r.value}" + ("" if isinstance(r.value, Fraction) else f" (~{float(r.value):.9f})")
    else:
        rep = _quantum_fixed(game, dist, args)
        tolerances = {"ascent": 1e-10, "circle_grid": float(args.grid)}
        result = {"value": number(rep.upper) if rep.exact else None, "lower": number(rep.lower), "upper": number(rep.upper)}
        certs = {"quantum": _quantum_certificate(rep.certificate), "distribution": certificate(dist)}
        method, note = rep.method, rep.note
        text = _bracket_text("omega_q", rep.lower, rep.upper)
    report = envelope(
        "value", game=game_descriptor(game), mode=_mode(analysis, "fixed"), result=result, method=method,
        note=note, certificates=certs, tolerances=tolerances, seed=args.seed,
    )
    return report, text


def _quantum_fixed(game: Game, dist: Distribution, args) -> qu.QuantumReport:
    try:
        if game.n_players == 2:
            return qu.quantum_2xor_fixed(game, dist, seed=args.seed, restarts=args.restarts, threads=args.threads)
        c = symmetric_coeffs(game)
        p = SymmetricDistribution.from_distribution(dist, game.n_players)
        return qu.quantum_symmetric_fixed(c, p, grid=args.grid)
    except NotXorGame:
        raise CliError("quantum values are only supported for XOR games", EXIT_UNSUPPORTED) from None
    except (NotSymmetric, NotBinaryInputs) as exc:
        raise CliError(f"quantum values with more than two players need a symmetric game and distribution: {exc}",
                       EXIT_UNSUPPORTED) from None


def _quantum_certificate(cert):
    if isinstance(cert, tuple):  # circle formula: (class probabilities, maximising point)
        p, point = cert
        return {"kind": "circle", "p": [number(v) for v in p.p], "theta": point.theta}
    if isinstance(cert, SymmetricDistribution):
        return {"kind": "symmetric_distribution", "p": [number(v) for v in cert.p]}
    return certificate(cert)


def _bracket_text(label, lower, upper) -> str:
    if lower == upper:
        return f"{label} = {upper}"
    return f"{label} in [{float(lower):.9f}, {float(upper):.9f}]"


def cmd_worst(args) -> tuple[dict, str]:
    doc = load_source(args.game)
    game = doc.game
    analysis = _analysis(args)
    tolerances: dict = {}
    code = EXIT_OK
    if analysis == "classical":
        try:
            r = cl.classical_worst(game)
            ok = cl.verify_worst_certificate(game, r)
            method, note = r.method, r.note + ("" if ok else "; certificate check FAILED")
        except cl.CapExceeded as exc:
            known = match_builtin(game)
            if not known or known[0] not in ("chsh", "ee", "nand", "ma"):
                raise CliError(str(exc), EXIT_UNSUPPORTED) from None
            r = cl.closed_form_classical(known[0], *known[1])
            method, note = "closed_form", f"{exc}; closed form used"
        if isinstance(r, cl.Interval):
            result = {"value": None, "lower": number(r.lower), "upper": number(r.upper),
                      "text": f"[{r.lower_text}, {r.upper_text}]"}
            certs = {}
            text = f"omega_c in [{r.lower_text}, {r.upper_text}]"
            note = r.note
        else:
            result = {"value": number(r.value), "lower": number(r.value), "upper": number(r.value),
                      "win_probability": number(r.win_probability)}
            certs = {"strategy": certificate(r.certificate_strategy),
                     "distribution": certificate(r.certificate_distribution)}
            text = f"omega_c = {r.value}"
    elif analysis == "quantum":
        rep = _quantum_worst(game, args)
        tolerances = {"minimax": args.tol, "circle_grid": float(args.grid)}
        result = {"value": number(rep.upper, args.tol) if rep.exact or rep.method == "minimax" else None,
                  "lower": number(rep.lower, args.tol), "upper": number(rep.upper, args.tol)}
        certs = {"distribution": _quantum_certificate(rep.certificate)}
        method, note = rep.method, rep.note
        text = _bracket_text("omega_q", rep.lower, rep.upper)
        if rep.method == "minimax":
            text = f"omega_q = {float(rep.upper):.9f} (bracket [{float(rep.lower):.9f}, {float(rep.upper):.9f}])"
            if rep.width > args.tol:
                code = EXIT_NONCONVERGED
    else:
        result, certs, method, note, text = _no_shared_worst(game, args)
        tolerances = {"grid_step": 1.0 / args.product_grid}
    report = envelope(
        "worst", game=game_descriptor(game), mode=_mode(analysis, "worst"), result=result, method=method,
        note=note, certificates=certs, tolerances=tolerances, seed=args.seed,
    )
    if code:
        raise _ReportedFailure(report, text, code)
    return report, text


class _ReportedFailure(Exception):
    def __init__(self, report, text, code):
        super().__init__(text)
        self.report, self.text, self.code = report, text, code


def _quantum_worst(game: Game, args) -> qu.QuantumReport:
    known = match_builtin(game)
    if known and known[0] == "ee":
        return qu.ee_quantum_bounds(known[1][0])
    try:
        c = symmetric_coeffs(game)
    except NotXorGame:
        raise CliError("quantum values are only supported for XOR games", EXIT_UNSUPPORTED) from None
    except (NotSymmetric, NotBinaryInputs) as exc:
        raise CliError(f"worst-case quantum values need a symmetric binary-input XOR game: {exc}",
                       EXIT_UNSUPPORTED) from None
    return qu.quantum_symmetric_worst(c, tol=args.tol, grid=args.grid)


def _no_shared_worst(game: Game, args):
    verdict = None
    if game.n_players == 2:
        try:
            verdict = ns.xor_dichotomy(game)
        except NotXorGame:
            pass
    if isinstance(verdict, ns.PerfectDeterministic):
        strategy = ns.ProductStrategy.from_deterministic(verdict.strategy)
        one = Fraction(1)
        return ({"value": number(one), "lower": number(one), "upper": number(one)},
                {"strategy": certificate(strategy)}, "dichotomy", "won on every input deterministically",
                "omega_hat = 1")
    if game.input_sizes == (2, 2):
        r = ns.product_worst(game, grid=args.product_grid)
        tol = 1e-9
        if verdict is not None:
            upper = Fraction(0)
            note = "no deterministic strategy wins every input, so the value is at most 0"
        else:
            upper = None
            note = "lower bound from product-strategy search"
        result = {"value": number(r.value, tol) if verdict is None else None, "lower": number(r.value, tol),
                  "upper": number(upper) if upper is not None else None}
        if r.exact_text:
            result["text"] = r.exact_text
            note = f"exact value {r.exact_text}"
        text = f"omega_hat = {r.value:.9f}" + (f" ({r.exact_text})" if r.exact_text else "")
        if verdict is not None:
            text = f"omega_hat <= 0 (search found {r.value:.9f})"
        return result, {"strategy": certificate(r.strategy)}, "product_search", note, text
    if verdict is not None:
        zero = Fraction(0)
        return ({"value": None, "lower": None, "upper": number(zero)}, {}, "dichotomy",
                "no deterministic strategy wins every input, so the value is at most 0", "omega_hat <= 0")
    raise CliError("no-shared analysis supports two-player XOR games and two-player binary-input games",
                   EXIT_UNSUPPORTED)


def cmd_simulate(args) -> tuple[dict, str]:
    doc = load_source(args.game)
    game, dist = doc.game, resolve_dist(args.dist, doc)
    strategy = _simulation_strategy(args, doc, dist)
    try:
        res = simulate(game, strategy, dist, args.rounds, args.seed)
    except GameError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    exact = exact_value(game, strategy, dist)
    result = {"rounds": res.rounds, "wins": res.wins, "empirical_value": number(res.empirical_value, res.stderr),
              "stderr": number(res.stderr, 1e-12), "exact_value": number(exact),
              "within_4_stderr": res.within(exact)}
    report = envelope(
        "simulate", game=game_descriptor(game), mode={"analysis": "simulation", "setting": "fixed",
                                                      "randomness": "shared"},
        result=result, method=f"philox monte carlo ({args.strategy})", certificates={"strategy": certificate(strategy),
                                                                                     "distribution": certificate(dist)},
        tolerances={}, seed=args.seed,
    )
    text = (f"empirical value {res.empirical_value:.6f} +- {res.stderr:.6f} over {res.rounds} rounds; "
            f"exact {float(exact):.6f}")
    return report, text


def _simulation_strategy(args, doc: GameDocument, dist: Distribution):
    game = doc.game
    kind = args.strategy
    if kind == "file":
        if doc.strategy is None:
            raise CliError("the game source has no 'strategy' rows; use --strategy classical|quantum", EXIT_INPUT)
        return doc.strategy
    if kind == "classical":
        try:
            return cl.classical_fixed(game, dist, threads=args.threads).certificate_strategy
        except cl.CapExceeded as exc:
            raise CliError(str(exc), EXIT_UNSUPPORTED) from None
    if kind == "quantum":
        if game.n_players != 2:
            raise CliError("vector strategies need a two-player XOR game", EXIT_UNSUPPORTED)
        try:
            return qu.quantum_2xor_fixed(game, dist, seed=args.seed, restarts=args.restarts).certificate
        except NotXorGame:
            raise CliError("vector strategies need a two-player XOR game", EXIT_UNSUPPORTED) from None
    raise CliError(f"unknown strategy source {kind!r}", EXIT_INPUT)


def cmd_verify(args) -> tuple[dict, str, int]:
    only = None
    if args.only:
        only = {g.strip() for g in args.only.split(",") if g.strip()}
        unknown = only - set(GROUPS)
        if unknown:
            raise CliError(f"unknown group(s) {', '.join(sorted(unknown))}; known: {', '.join(GROUPS)}", EXIT_INPUT)
    rows = run_checks(only)
    width = max((len(r.name) for r in rows), default=10)
    lines = [f"{'group':9} {'check':{width}}  result  computed | expected"]
    for r in rows:
        lines.append(f"{r.group:9} {r.name:{width}}  {'PASS' if r.passed else 'FAIL':6}  {r.computed} | {r.expected}")
    passed = all(r.passed for r in rows)
    lines.append(f"{sum(r.passed for r in rows)}/{len(rows)} checks passed")
    report = envelope(
        "verify-paper",
        rows=[{"group": r.group, "name": r.name, "passed": r.passed, "computed": r.computed,
               "expected": r.expected, "seconds": round(r.seconds, 3)} for r in rows],
        passed=passed,
    )
    return report, "\n".join(lines), EXIT_OK if passed else EXIT_INPUT


def cmd_parse_check(args) -> int:
    try:
        doc = load_game_file(args.file)
    except OSError as exc:
        print(f"{args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except DslError as exc:
        print(f"{args.file}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GameError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    g = doc.game
    parts = [f"ok: {g.name or '(unnamed)'}", f"{g.n_players} players", f"inputs {' '.join(map(str, g.input_sizes))}"]
    if doc.distribution is not None:
        parts.append(f"{len(doc.distribution.support())} dist rows")
    if doc.strategy is not None:
        parts.append(f"{len(doc.strategy)} strategy rows")
    print(", ".join(parts))
    if args.canonical:
        sys.stdout.write(serialize_game(g, doc.distribution, doc.strategy))
    return EXIT_OK


def cmd_builtins(args) -> int:
    for gid, (_, arity) in BUILTINS.items():
        usage = f"builtin:{gid}" + ((",<m>" if gid == "ee" else ",<n>") if arity else "")
        print(f"{usage:16} {_BUILTIN_HELP.get(gid, '')}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlgames", description="Classical and quantum values of non-local games.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, modes=("classical", "quantum")):
        p.add_argument("game", help="builtin:<id>[,<param>] or a .nlg file")
        g = p.add_mutually_exclusive_group()
        if "classical" in modes:
            g.add_argument("--classical", action="store_true", help="shared randomness (default)")
        if "quantum" in modes:
            g.add_argument("--quantum", action="store_true", help="shared entanglement")
        if "no-shared" in modes:
            g.add_argument("--no-shared", dest="no_shared", action="store_true", help="no shared randomness")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", metavar="PATH", help="write the machine report here ('-' for stdout)")
        p.add_argument("--threads", type=_positive, default=1)
        p.add_argument("--restarts", type=_positive, default=8, help="vector ascent restarts")
        p.add_argument("--grid", type=_positive, default=4096, help="circle evaluation grid")
        p.add_argument("--tol", type=float, default=1e-6, help="minimax bracket tolerance")

    p = sub.add_parser("value", help="value under a fixed input distribution")
    common(p)
    p.add_argument("--dist", help="uniform | point:x1,...,xn (1-based) | file with 'dist' rows")
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("worst", help="worst-case value over input distributions")
    common(p, ("classical", "quantum", "no-shared"))
    p.add_argument("--product-grid", dest="product_grid", type=_positive, default=200,
                   help="grid resolution of the product-strategy search")
    p.set_defaults(func=cmd_worst)

    p = sub.add_parser("simulate", help="Monte Carlo play of a strategy")
    common(p, ())
    p.add_argument("--dist", help="uniform | point:x1,...,xn | file")
    p.add_argument("--strategy", default="file", choices=("file", "classical", "quantum"),
                   help="strategy rows of the game file, the best classical strategy or an ascent vector strategy")
    p.add_argument("--rounds", type=_positive, default=10**6)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-paper", help="recompute the reference table")
    p.add_argument("--only", help=f"comma-separated groups: {', '.join(GROUPS)}")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("parse-check", help="validate a .nlg file")
    p.add_argument("file")
    p.add_argument("--canonical", action="store_true", help="also print the canonical serialisation")
    p.set_defaults(func=cmd_parse_check)

    p = sub.add_parser("builtins", help="list builtin games")
    p.set_defaults(func=cmd_builtins)
    return parser


def _emit(report: dict, text: str, json_path: str | None):
    print(text)
    if json_path == "-":
        sys.stdout.write(dumps(report))
    elif json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb in ("parse-check", "builtins"):
        return args.func(args)
    try:
        out = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except _ReportedFailure as exc:
        _emit(exc.report, exc.text, args.json)
        print("error: minimax did not converge to the requested tolerance", file=sys.stderr)
        return exc.code
    except GameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report, text, *code = out
    _emit(report, text, args.json)
    return code[0] if code else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
