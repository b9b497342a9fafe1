"""Compare the three kernel tiers (numba / numpy / python) on hot paths.

Each workload runs once per backend with identical inputs; results must
agree exactly across tiers (the fallbacks are drop-in replacements), and
the table reports best-of-``--repeat`` wall times.

Usage:
    python3 benchmarks/bench_backends.py [--repeat 3] [--trials 500]
"""

from __future__ import annotations

import argparse
import os
import time

from ptf import kernels
from ptf.ptf_count import count_ptf
from ptf.random_tensors import ExperimentConfig, lo_empirical, mc_independence


def _time(fn, repeat: int):
    best, value = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, value


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--trials", type=int, default=500, help="MC trials")
    ap.add_argument("--lo-trials", type=int, default=200_000)
    args = ap.parse_args()

    backends = ["numpy", "python"]
    if kernels.HAS_NUMBA:
        backends.insert(0, "numba")
    else:
        print("numba not importable; comparing numpy and python tiers only")

    workloads = [
        ("count T(3,2)", lambda: count_ptf(3, 2).count),
        ("count T(4,1)", lambda: count_ptf(4, 1).count),
        (
            f"mc independence n=12 d=2 m=30 ({args.trials} trials)",
            lambda: mc_independence(
                ExperimentConfig(n=12, d=2, m=30, trials=args.trials, master_seed=7)
            ).successes,
        ),
        (
            f"signed-sum hits n=13 ({args.lo_trials} trials)",
            lambda: lo_empirical([1] * 13, 1, args.lo_trials, 11).successes,
        ),
    ]

    prev = os.environ.get("PTF_BACKEND")
    try:
        results = {}
        for name, fn in workloads:
            row = {}
            baseline = None
            for b in backends:
                os.environ["PTF_BACKEND"] = b
                if b == "numba":
                    fn()  # warm-up: pay JIT compilation outside the timing
                dt, value = _time(fn, args.repeat)
                row[b] = dt
                if baseline is None:
                    baseline = value
                elif value != baseline:
                    raise AssertionError(
                        f"backend {b} disagrees on {name}: {value} != {baseline}"
                    )
            results[name] = (row, baseline)

        width = max(len(n) for n, _ in workloads)
        header = f"{'workload':<{width}}  " + "".join(
            f"{b:>12}" for b in backends
        )
        print(header)
        print("-" * len(header))
        for name, (row, value) in results.items():
            cells = "".join(f"{row[b]:>11.4f}s" for b in backends)
            print(f"{name:<{width}}  {cells}   -> {value}")
        print("\nall backends agree on every workload")
    finally:
        if prev is None:
            os.environ.pop("PTF_BACKEND", None)
        else:
            os.environ["PTF_BACKEND"] = prev


if __name__ == "__main__":
    main()
