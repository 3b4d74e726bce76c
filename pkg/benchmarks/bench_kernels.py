#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dzw import _kernels_py  # noqa: E402

try:
    from dzw import _kernels
except ImportError:
    _kernels = None


def timeit(fn, *args, repeat=5):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_dirichlet(n_terms=200_000):
    rng = np.random.default_rng(42)
    w = (rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)).tolist()
    lengths = np.sort(rng.uniform(0.5, 20.0, n_terms)).tolist()
    s = 1.3 + 0.7j
    t_py, v_py = timeit(_kernels_py.exp_dirichlet_sum, w, lengths, s)
    row = [f"exp_dirichlet_sum[{n_terms} terms]", f"{t_py * 1e3:9.2f}"]
    if _kernels is not None:
        t_cy, v_cy = timeit(_kernels.exp_dirichlet_sum, w, lengths, s)
        row += [f"{t_cy * 1e3:9.2f}", f"{t_py / t_cy:7.1f}x", f"{abs(v_py - v_cy):.2e}"]
    print("  ".join(row))


def bench_sym(kmax=70, nmax=60, primes=40):
    rng = np.random.default_rng(7)
    xs = []
    for _ in range(primes):
        r = rng.uniform(0.2, 0.8)
        t = rng.uniform(0, 2 * np.pi)
        xs.append([r * np.exp(1j * t), r * np.exp(-1j * t)])

    def run(mod):
        acc = 0.0
        for x in xs:
            acc += sum(abs(v) for v in mod.sym_power_row_sums(x, kmax, nmax))
        return acc

    t_py, v_py = timeit(run, _kernels_py)
    row = [f"sym_power_row_sums[{primes} orbits, k<={kmax}, N<={nmax}]", f"{t_py * 1e3:9.2f}"]
    if _kernels is not None:
        t_cy, v_cy = timeit(run, _kernels)
        row += [f"{t_cy * 1e3:9.2f}", f"{t_py / t_cy:7.1f}x", f"{abs(v_py - v_cy):.2e}"]
    print("  ".join(row))


def main():
    print(f"compiled extension: {'present' if _kernels is not None else 'MISSING'}")
    header = ["kernel", "python ms"]
    if _kernels is not None:
        header += ["cython ms", "speedup", "|diff|"]
    print("  ".join(header))
    bench_dirichlet()
    bench_sym()


if __name__ == "__main__":
    main()
