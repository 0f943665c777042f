"""Compare the compiled and NumPy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]

Each workload is run on both backends; outputs are checked for equality
before timings are reported.
"""
import argparse
import time

import numpy as np

from nlgames.classical import _kernel_args
from nlgames.game import Distribution, build_ee, build_ma, build_nand
from nlgames.kernels import load_backend


def _best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    for game in (build_ee(6), build_ee(7), build_nand(6), build_ma(7)):
        args = _kernel_args(game)
        total = game.n_strategies
        yield f"payoff_block {game.name} ({total} x {game.n_inputs})", (
            lambda k, a=args, t=total: k.payoff_block(*a, 0, t)
        )
        dist = Distribution.uniform(game.input_sizes)
        sup = dist.support()
        w = np.ones(len(sup), dtype=np.int64)
        args_s = _kernel_args(game, sup)
        yield f"best_response {game.name}", (lambda k, a=args_s, w=w, t=total: k.best_response(*a, w, 0, t))
    rng = np.random.default_rng(0)
    for degree in (10, 100):
        coeffs = rng.normal(size=degree + 1)
        thetas = np.linspace(0, 2 * np.pi, 1 << 16, endpoint=False)
        yield f"circle_moduli degree {degree}, 65536 points", (
            lambda k, c=coeffs, th=thetas: k.circle_moduli(c, th)
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    py = load_backend("python")
    try:
        cy = load_backend("cython")
    except ImportError:
        print("compiled backend not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'workload':48} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in workloads():
        tp, outp = _best_of(lambda: fn(py), args.repeat)
        tc, outc = _best_of(lambda: fn(cy), args.repeat)
        if isinstance(outp, tuple):
            same = outp == outc
        else:
            same = np.allclose(outp, outc, rtol=0, atol=1e-12)
        if not same:
            print(f"{name}: backends disagree")
            return 1
        print(f"{name:48} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
