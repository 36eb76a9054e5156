"""Compare the compiled and numpy generator kernels.

    python3 benchmarks/bench_kernels.py [--rows N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from poextremes import _kernels_py

try:
    from poextremes import _kernels
except ImportError:  # extension not built
    _kernels = None

FAMILIES = [("independence", 0, 0.0), ("nelsen-4-2-19", 1, 1.5), ("nelsen-4-2-8", 2, 1.5)]


def cases(rows, rng):
    u = rng.uniform(0.01, 0.99, size=(rows, 3))
    u2 = u[:, :2].copy()
    w = rng.uniform(0.05, 0.95, size=rows)
    return {
        "combine": lambda mod, code, p: mod.combine(code, p, u, 1.0),
        "partials": lambda mod, code, p: mod.partials(code, p, u),
        "conditional_inverse": lambda mod, code, p: mod.conditional_inverse(code, p, u2[:, 0], w, 64),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"rows={args.rows}, best of {args.repeat}")
    print(f"{'kernel':<22}{'family':<16}{'numpy ms':>10}{'compiled ms':>13}{'speedup':>9}")
    for name, fn in cases(args.rows, rng).items():
        for fam, code, p in FAMILIES:
            t_py = min(timeit.repeat(lambda: fn(_kernels_py, code, p), number=1, repeat=args.repeat))
            if _kernels is None:
                print(f"{name:<22}{fam:<16}{1e3 * t_py:>10.2f}{'n/a':>13}{'':>9}")
                continue
            t_c = min(timeit.repeat(lambda: fn(_kernels, code, p), number=1, repeat=args.repeat))
            print(f"{name:<22}{fam:<16}{1e3 * t_py:>10.2f}{1e3 * t_c:>13.2f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
