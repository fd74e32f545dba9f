#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure numpy fallback.

Times the Jacobi eigensolver (real symmetric and complex Hermitian) and
the Gram-Schmidt kernel on random inputs, and prints per-call times with
the speedup of the compiled extension.  numpy.linalg.eigh is shown as a
reference point, not as a backend.

Usage:
    python benchmarks/bench_kernels.py [--sizes 8,16,32,64] [--repeats 20]
"""

import argparse
import time

import numpy as np

from isrlift import kernels


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


def bench_jacobi(sizes, repeats):
    rng = np.random.default_rng(0)
    print("\nJacobi eigensolver")
    header = f"{'n':>4} {'kind':>8}" + "".join(
        f" {name:>14}" for name in kernels.AVAILABLE_BACKENDS
    ) + f" {'numpy.eigh':>14} {'speedup':>8}"
    print(header)
    for n in sizes:
        for cplx in (False, True):
            z = rng.standard_normal((n, n))
            if cplx:
                z = z + 1j * rng.standard_normal((n, n))
            a = (z + z.conj().T) / 2
            times = {}
            for name in kernels.AVAILABLE_BACKENDS:
                times[name] = _time(lambda: kernels.jacobi_eigh(a, backend=name), repeats)
            t_np = _time(lambda: np.linalg.eigh(a), repeats)
            row = f"{n:>4} {'complex' if cplx else 'real':>8}"
            for name in kernels.AVAILABLE_BACKENDS:
                row += f" {_fmt(times[name]):>14}"
            row += f" {_fmt(t_np):>14}"
            if "compiled" in times and "python" in times:
                row += f" {times['python'] / times['compiled']:>7.1f}x"
            print(row)


def bench_mgs(sizes, repeats):
    rng = np.random.default_rng(1)
    print("\nGram-Schmidt (orthonormalize n random rows of length n)")
    header = f"{'n':>4}" + "".join(
        f" {name:>14}" for name in kernels.AVAILABLE_BACKENDS
    ) + f" {'speedup':>8}"
    print(header)
    for n in sizes:
        x = rng.standard_normal((n, n))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        times = {}
        for name in kernels.AVAILABLE_BACKENDS:
            times[name] = _time(
                lambda: kernels.mgs_rows(None, x, drop_tol=1e-10, backend=name), repeats
            )
        row = f"{n:>4}"
        for name in kernels.AVAILABLE_BACKENDS:
            row += f" {_fmt(times[name]):>14}"
        if "compiled" in times and "python" in times:
            row += f" {times['python'] / times['compiled']:>7.1f}x"
        print(row)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,16,32,64")
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"backends built: {', '.join(kernels.AVAILABLE_BACKENDS)}")
    print(f"default backend: {kernels.BACKEND}")
    bench_jacobi(sizes, args.repeats)
    bench_mgs(sizes, args.repeats)


if __name__ == "__main__":
    main()
