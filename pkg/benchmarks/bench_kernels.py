#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the two hot loops (full lattice enumeration and per-element descent
sweeps) on random instances and prints a speedup table:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --subsurfaces 6 --levels 8 --repeats 30
"""

import argparse
import time

import numpy as np

from irsma.channel import lattice_phases
from irsma.kernels import _pure

try:
    from irsma.kernels import _fast
except ImportError:
    _fast = None


def make_instance(rng, m):
    cn = lambda n: (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return (
        np.conj(cn(m)),
        np.conj(cn(m)),
        complex(cn(1)[0]),
        complex(cn(1)[0]),
        1.0,
        2.0,
    )


def time_call(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--subsurfaces", type=int, default=5)
    parser.add_argument("--levels", type=int, default=8)
    parser.add_argument("--sweeps", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    m, L = args.subsurfaces, args.levels
    table = lattice_phases(L)
    instance = make_instance(rng, m)
    start = rng.integers(0, L, m)

    backends = [("pure", _pure)]
    if _fast is not None:
        backends.append(("cython", _fast))
    else:
        print("compiled kernels unavailable; timing the fallback only")

    print(f"instance: M={m}, L={L} ({L**m} candidates), ao sweeps={args.sweeps}")
    print(f"{'kernel':<32}{'backend':<10}{'best (ms)':>12}{'speedup':>10}")
    for kernel, make in (
        (
            "enumerate_weighted_inverse",
            lambda impl: lambda: impl.enumerate_weighted_inverse(*instance, L, table),
        ),
        (
            "ao_sweeps",
            lambda impl: lambda: impl.ao_sweeps(
                *instance, L, table, start,
                _pure.evaluate_levels(start, table, *instance),
                args.sweeps, -1.0,  # negative tolerance: never exit early
            ),
        ),
    ):
        reference = None
        for name, impl in backends:
            elapsed = time_call(make(impl), args.repeats)
            if reference is None:
                reference = elapsed
                speedup = ""
            else:
                speedup = f"{reference / elapsed:8.1f}x"
            print(f"{kernel:<32}{name:<10}{elapsed * 1e3:>12.3f}{speedup:>10}")

    # results must agree between backends
    if _fast is not None:
        p = _pure.enumerate_weighted_inverse(*instance, L, table)
        f = _fast.enumerate_weighted_inverse(*instance, L, table)
        assert np.array_equal(p[0], f[0]) and abs(p[1] - f[1]) <= 1e-12 * p[1]
        print("backend agreement: ok")


if __name__ == "__main__":
    main()
