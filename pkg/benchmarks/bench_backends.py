#!/usr/bin/env python3
"""Benchmark the compiled Philox kernel against the NumPy fallback.

Measures raw uniform generation and the end-to-end exponential
order-statistics path, and verifies on the way that both backends produce
bit-identical output.  Run as ``python benchmarks/bench_backends.py``.
"""

import time

import numpy as np

from ordstat._kernel import _philox_np

try:
    from ordstat._kernel import _philox_cy
except ImportError:
    _philox_cy = None


def _rate(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_uniforms(rows, cols):
    draws = rows * cols
    out_np, t_np = _rate(_philox_np.uniform_matrix, 42, 0, rows, cols)
    print(f"uniform_matrix({rows} x {cols}):")
    print(f"  python   {draws / t_np / 1e6:8.1f} M draws/s")
    if _philox_cy is not None:
        out_cy, t_cy = _rate(_philox_cy.uniform_matrix, 42, 0, rows, cols)
        assert np.array_equal(out_np, out_cy), "backends diverged"
        print(f"  compiled {draws / t_cy / 1e6:8.1f} M draws/s   (x{t_np / t_cy:.1f})")
    else:
        print("  compiled      n/a (extension not built)")


def bench_order_stats(n, replicates):
    import os

    from ordstat.renyi import exponential_order_stats_batch

    draws = n * replicates
    results = {}
    for backend in ("python", "compiled"):
        if backend == "compiled" and _philox_cy is None:
            continue
        os.environ["ORDSTAT_KERNEL"] = backend
        # re-import with the forced backend in a fresh interpreter state
        import importlib

        import ordstat._kernel as kern
        importlib.reload(kern)
        import ordstat.rng as rng
        importlib.reload(rng)
        import ordstat.renyi as renyi
        importlib.reload(renyi)
        out, t = _rate(renyi.exponential_order_stats_batch, n, 42, 0, replicates)
        results[backend] = (out, t)
        print(f"  {backend:8s} {draws / t / 1e6:8.1f} M draws/s "
              f"({t * 1e3:.0f} ms per batch)")
    os.environ.pop("ORDSTAT_KERNEL", None)
    if len(results) == 2:
        assert np.array_equal(results["python"][0], results["compiled"][0]), \
            "backends diverged"
        print(f"  end-to-end speedup x{results['python'][1] / results['compiled'][1]:.1f}, "
              "outputs bit-identical")


if __name__ == "__main__":
    bench_uniforms(4096, 1024)
    print(f"exponential order statistics (n=1000, R=2000):")
    bench_order_stats(1000, 2000)
