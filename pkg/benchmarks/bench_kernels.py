"""Compare the numba kernels with the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--iters 200]

Each kernel is called once before timing so JIT compilation is excluded.
"""
import argparse
import time

import numpy as np

from entwit import kernels, statezoo
from entwit.maximizer import random_unitary

SHAPES = [(2, 2), (3, 3), (2, 2, 2), (2, 2, 2, 2), (4, 4)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def setup(dims, seed=0):
    rho = statezoo.random_density(dims, 2, seed)
    rng = np.random.default_rng(seed)
    us = kernels.pack_unitaries([random_unitary(d, rng) for d in dims], dims)
    return np.ascontiguousarray(rho.matrix), us, np.array(dims, dtype=np.int64), min(dims)


def bench_shape(dims, repeat, iters):
    mat, us, d, n = setup(dims)
    row = {}
    for name, (_, value, gradient, _, ascend) in kernels.BACKENDS.items():
        def run_value():
            for _ in range(iters):
                value(mat, us, d, n)

        def run_gradient():
            for _ in range(iters // 10 or 1):
                gradient(mat, us, d, n, 1e-5)

        def run_ascend():
            ascend(mat, us.copy(), d, n, 1e-5, 100, 1e-10, 50, 0.1, 1.0, 1e-12)

        for fn in (run_value, run_gradient, run_ascend):
            fn()  # warmup / compile
        row[name] = [best_of(fn, repeat) for fn in (run_value, run_gradient, run_ascend)]
    return row


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--iters", type=int, default=200)
    args = parser.parse_args(argv)

    print(f"{'dims':<14} {'kernel':<10} {'numba [ms]':>12} {'numpy [ms]':>12} {'speedup':>9}")
    for dims in SHAPES:
        row = bench_shape(dims, args.repeat, args.iters)
        for k, label in enumerate(("value", "gradient", "ascend")):
            fast, slow = row["numba"][k] * 1e3, row["numpy"][k] * 1e3
            print(f"{str(dims):<14} {label:<10} {fast:>12.2f} {slow:>12.2f} {slow / fast:>8.1f}x")


if __name__ == "__main__":
    main()
