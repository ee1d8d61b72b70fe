"""Compiled core vs numpy fallback on the hot kernels.

    python3 benchmarks/bench_core.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from lapbound import _backend, _pycore

try:
    from lapbound import _core
except ImportError:
    _core = None


def cases(mod):
    rng = np.random.default_rng(0)
    z = np.exp(rng.uniform(-3, 0, 2000))
    x = np.exp(np.linspace(-15, 12, 512))
    y = np.exp(np.linspace(-10, 0, 512))
    return {
        "tail_integral delta=0.5 (2000 pts)": lambda: mod.tail_integral(z, 1.0, 0.5, 1.0),
        "tail_derivative delta=0.5 (2000 pts)": lambda: mod.tail_derivative(z, 1.0, 0.5, 1.0),
        "tail_scalar x2000": lambda: [mod.tail_scalar(float(t), 1.0, 0.5, 1.0) for t in z],
        "tail_quad x50": lambda: [mod.tail_quad(float(t), 1.0, 0.5, 1.0, 1e-11) for t in z[:50]],
        "kernel_matrix 512x512": lambda: mod.kernel_matrix(x, y, 1.0, None),
        "kernel_matrix 512x512 cutoff": lambda: mod.kernel_matrix(x, y, 1.0, np.full_like(y, 2.0)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"selected backend: {_backend.NAME}")
    pure = cases(_pycore)
    comp = cases(_core) if _core is not None else {}
    print(f"{'case':40s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for name, fn in pure.items():
        tp = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        if name in comp:
            tc = min(timeit.repeat(comp[name], number=1, repeat=args.repeat)) * 1e3
            print(f"{name:40s} {tp:10.2f} {tc:12.2f} {tp / tc:8.1f}")
        else:
            print(f"{name:40s} {tp:10.2f} {'n/a':>12s}")


if __name__ == "__main__":
    main()
