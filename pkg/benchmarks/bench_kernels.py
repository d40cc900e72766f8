#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends.

Run:
    python3 benchmarks/bench_kernels.py [--reps 200000]

Reports the kernel-only time (handoff + rate logic on presampled sorted
batches, where the backends actually differ) and the end-to-end estimate
time (which also contains the shared sampling and sorting work). Timings
exclude JIT compilation; the "identical" column confirms both backends
return bit-identical estimates.
"""

import argparse
import time

import numpy as np

from femtocap import kernels
from femtocap.kernels import _numbaimpl, _numpy
from femtocap.model import NetworkConfig, sample_factors
from femtocap.montecarlo import _cdma_params, _tdma_params, estimate
from femtocap.policy import fair_policy

CASES = [
    ("tdma", 20, 3),
    ("tdma", 60, 3),
    ("cdma", 100, 1),
    ("cdma", 200, 1),
]


def kernel_only(scheme, n, k, reps, seed=7):
    cfg = NetworkConfig()
    rng = np.random.default_rng(seed)
    ordered = np.sort(sample_factors(reps * n, cfg, rng).reshape(reps, n), axis=1)
    if scheme == "tdma":
        params = _tdma_params(cfg, fair_policy(k), n)
        runners = (_numbaimpl.simulate_tdma, _numpy.simulate_tdma)
    else:
        params = _cdma_params(cfg, fair_policy(k), n)
        runners = (_numbaimpl.simulate_cdma, _numpy.simulate_cdma)
    times, values = [], []
    for fn in runners:
        t0 = time.perf_counter()
        out = fn(ordered, *params)
        times.append(time.perf_counter() - t0)
        values.append(tuple(float(np.sum(a)) for a in out[:3]))
    return times, values[0] == values[1]


def end_to_end(scheme, n, k, reps, seed=7):
    cfg = NetworkConfig()
    times, values = [], []
    for backend in ("numba", "numpy"):
        kernels.set_backend(backend)
        t0 = time.perf_counter()
        report, _ = estimate(cfg, fair_policy(k), n, scheme, "open", reps, seed)
        times.append(time.perf_counter() - t0)
        values.append((report.c0, report.csum))
    kernels.set_backend("numba")
    return times, values[0] == values[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=200_000)
    args = ap.parse_args()

    # warm the JIT so compile time is not billed to the numba column
    for scheme, n, k in CASES:
        kernel_only(scheme, n, k, 1000)

    print(f"{'case':<16} {'kernel numba':>12} {'kernel numpy':>12} {'speedup':>8} | "
          f"{'e2e numba':>10} {'e2e numpy':>10} {'speedup':>8}  identical")
    for scheme, n, k in CASES:
        (t_nb, t_np), same_k = kernel_only(scheme, n, k, args.reps)
        (e_nb, e_np), same_e = end_to_end(scheme, n, k, args.reps)
        label = f"{scheme} N={n} K={k}"
        print(
            f"{label:<16} {t_nb:>11.3f}s {t_np:>11.3f}s {t_np / t_nb:>7.2f}x | "
            f"{e_nb:>9.3f}s {e_np:>9.3f}s {e_np / e_nb:>7.2f}x  {same_k and same_e}"
        )


if __name__ == "__main__":
    main()
