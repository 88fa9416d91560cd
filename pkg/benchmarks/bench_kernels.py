"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the environment switch is ignored.
Results are checked for equality before any timing is reported.
"""

import argparse
import timeit

import numpy as np

from goid import _kernels_py

try:
    from goid import _kernels as _compiled
except ImportError:
    _compiled = None


def cases(rng):
    small = rng.integers(-3, 4, size=(60, 60), dtype=np.int64)
    wide = rng.integers(-2**20, 2**20, size=(150, 150), dtype=np.int64)
    # the worst-case bound exceeds int64 but the true entries fit
    tight = rng.integers(-2**29, 2**29, size=(150, 150), dtype=np.int64)
    return [
        ("int_matmul 60x60 small entries", "int_matmul", (small, small)),
        ("int_matmul 150x150 entries near 2^20", "int_matmul", (wide, wide)),
        ("int_matmul 150x150 entries near 2^29", "int_matmul", (tight, tight)),
        ("monotone_scan n=6 vmax=18", "monotone_scan", (6, 18)),
        ("monotone_scan n=5 vmax=25", "monotone_scan", (5, 25)),
    ]


def same(x, y):
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x[0] == y[0] and x[1] == y[1] and [tuple(t) for t in x[2]] == [tuple(t) for t in y[2]]


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<40} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, name, call in cases(rng):
        py, cc = getattr(_kernels_py, name), getattr(_compiled, name)
        if not same(py(*call), cc(*call)):
            print(f"{label:<40} results differ")
            return 1
        t_py, t_cc = best(py, call, args.repeat), best(cc, call, args.repeat)
        print(f"{label:<40} {t_py:>10.4f} {t_cc:>11.4f} {t_py / t_cc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
