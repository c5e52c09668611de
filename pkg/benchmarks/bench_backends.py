"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two hot paths through both implementations in one process:
batches of tridiagonal eigensolves (the branch-sweep / Gauss-rule
workload) and orthogonal-polynomial grid evaluation (the quadrature
workload), plus an end-to-end overlap sweep timed under whichever
backend this process selected (switch with MICZ9_BACKEND=numpy).

    python3 benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

import numpy as np

import micz9
from micz9 import _backend as bk
from micz9 import wavefield
from micz9.sector import enumerate_sectors, lambda_range


def timeit(fn, n_runs):
    fn()  # warm-up (and JIT compile on the numba path)
    times = []
    for _ in range(n_runs):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    t = np.array(times)
    return t.mean(), t.std(), t.min()


def print_row(name, mean, std, mn):
    print(f"{name:42s} {mean * 1e3:9.3f} ± {std * 1e3:7.3f} ms (min {mn * 1e3:8.3f} ms)")


def bench_eigensolves(n_runs):
    print("\ntridiagonal eigensolves (values + inverse-iteration vectors)")
    print("-" * 78)
    for n, batch in ((6, 400), (64, 20), (192, 4)):
        ks = np.arange(1.0, n)
        d = np.zeros(n)
        e = ks / np.sqrt(4.0 * ks * ks - 1.0)
        restol = 200 * np.finfo(np.float64).eps

        def run_numba():
            for _ in range(batch):
                w = bk.numba_impl["eigvals"](d, e, 1e-14)
                bk.numba_impl["eigvecs"](d, e, w, 100, restol)

        def run_numpy():
            for _ in range(batch):
                w = bk.numpy_impl["eigvals"](d, e, 1e-14)
                bk.numpy_impl["eigvecs"](d, e, w, 100, restol)

        if bk.numba_impl is not None:
            m1, s1, lo1 = timeit(run_numba, n_runs)
            print_row(f"  n={n:4d} x{batch:4d}  numba", m1, s1, lo1)
        m2, s2, lo2 = timeit(run_numpy, n_runs)
        print_row(f"  n={n:4d} x{batch:4d}  numpy", m2, s2, lo2)
        if bk.numba_impl is not None:
            print(f"  n={n:4d} speedup numba/numpy: {m2 / m1:5.1f}x")


def bench_polynomials(n_runs):
    print("\npolynomial recurrences on quadrature grids")
    print("-" * 78)
    for k, pts in ((8, 96 * 96), (12, 192 * 192)):
        x = np.linspace(0.0, 40.0, pts)
        out = np.empty_like(x)

        def run_numba():
            bk.numba_impl["laguerre"](k, 8.0, x, out)
            bk.numba_impl["jacobi"](k, 3.0, 5.0, x / 40.0, out)

        def run_numpy():
            bk.numpy_impl["laguerre"](k, 8.0, x)
            bk.numpy_impl["jacobi"](k, 3.0, 5.0, x / 40.0)

        if bk.numba_impl is not None:
            m1, s1, lo1 = timeit(run_numba, n_runs)
            print_row(f"  degree {k:2d} on {pts:6d} pts  numba", m1, s1, lo1)
        m2, s2, lo2 = timeit(run_numpy, n_runs)
        print_row(f"  degree {k:2d} on {pts:6d} pts  numpy", m2, s2, lo2)
        if bk.numba_impl is not None:
            print(f"  degree {k:2d} speedup numba/numpy: {m2 / m1:5.1f}x")


def bench_overlap_sweep(n_runs, m_max):
    print(f"\nend-to-end overlap sweep, backend = {micz9.BACKEND}")
    print("-" * 78)
    sectors = list(enumerate_sectors(m_max, 2 * m_max, 2 * m_max))

    def run():
        for s in sectors:
            for lam in lambda_range(s):
                for n_p in range(s.size):
                    wavefield.w_overlap_quadrature(s, lam, n_p, 48)

    m, sd, lo = timeit(run, n_runs)
    entries = sum(s.size**2 for s in sectors)
    print_row(f"  {len(sectors)} sectors / {entries} entries", m, sd, lo)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="fewer repetitions")
    ap.add_argument("--m-max", type=int, default=2, help="sector sweep size for the overlap run")
    args = ap.parse_args()
    runs = 3 if args.quick else 10

    print(f"selected backend: {micz9.BACKEND}"
          + ("" if bk.numba_impl is not None else " (numba unavailable or disabled)"))
    bench_eigensolves(runs)
    bench_polynomials(runs)
    bench_overlap_sweep(max(2, runs // 2), args.m_max)


if __name__ == "__main__":
    main()
