#!/usr/bin/env python3
"""Benchmark the compiled quadrature core against the numpy fallback.

Runs the chirped-grating integral kernel over representative detuning grids
(the workload behind every spectral-amplitude evaluation) and reports wall
times plus the worst cross-backend deviation.

Usage:
    python benchmarks/bench_kernels.py [--count 16384] [--repeats 3]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from biphoton import backend
from biphoton.crystal import CrystalSpec, default_detuning_grid
from biphoton.dispersion import dispersion_summary

try:
    from biphoton import _kernel
except ImportError:
    _kernel = None
from biphoton import _kernel_numpy


def workloads(count: int):
    spec = CrystalSpec()
    summary = dispersion_summary(spec)
    lin = default_detuning_grid(spec, summary, "linear", count=count)
    u_linear = summary.gvm * lin.samples()
    scaled = np.linspace(-1.6, 1.2, count)  # mimics the asymmetric exact band
    u_exact = 3000.0 * scaled
    return [
        ("band (linear mismatch)", u_linear, spec.aperiodicity, spec.length_cm / 2),
        ("wide (full-dispersion-like)", u_exact, spec.aperiodicity, spec.length_cm / 2),
    ]


def run(impl, u, alpha, half, threads):
    return impl.chirp_integrals(
        u, alpha, half, backend._GL_X, backend._GL_W,
        math.pi / 4, 1e-8, 20, threads,
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=16384)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    threads = backend.thread_count()
    print(f"grid points: {args.count}, threads: {threads}, "
          f"active backend: {backend.BACKEND}")
    if _kernel is None:
        print("compiled core not built; timing the numpy fallback only")

    for name, u, alpha, half in workloads(args.count):
        row = {}
        reference = None
        for label, impl in (("compiled", _kernel), ("numpy", _kernel_numpy)):
            if impl is None:
                continue
            best = math.inf
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                values = run(impl, u, alpha, half, threads)
                best = min(best, time.perf_counter() - t0)
            row[label] = best
            if reference is None:
                reference = values
            else:
                dev = np.max(np.abs(values - reference))
                print(f"  cross-backend max |difference|: {dev:.3e}")
        line = " | ".join(f"{k}: {v:8.3f} s" for k, v in row.items())
        if len(row) == 2:
            line += f" | speedup x{row['numpy'] / row['compiled']:.1f}"
        print(f"{name:30s} {line}")


if __name__ == "__main__":
    main()
