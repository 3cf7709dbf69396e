"""Throughput comparison of the jump-chain kernels.

Runs the same workload through the pure-Python kernel and (when built)
the compiled one, confirms the outputs are bit-identical, and prints
replicas/second for each.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kacgap.montecarlo import SimConfig, available_backends, simulate


def bench(backend: str, cfg: SimConfig, threads: int | None) -> tuple[float, np.ndarray]:
    t0 = time.perf_counter()
    result = simulate(cfg, backend=backend, threads=threads)
    dt = time.perf_counter() - t0
    return dt, result.radials


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--replicas", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None, help="compiled backend only")
    args = ap.parse_args()

    cfg = SimConfig(alpha=2, replicas=args.replicas, seed=args.seed, initial="linear")
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    print(f"workload: {args.replicas} replicas x {len(cfg.frames)} frames (alpha=2)")

    results = {}
    for name in backends:
        threads = args.threads if name == "compiled" else 1
        dt, radials = bench(name, cfg, threads)
        results[name] = (dt, radials)
        print(f"{name:>9}: {dt:8.2f} s  ({args.replicas / dt:10.0f} replicas/s)")

    if len(results) == 2:
        same = np.array_equal(results["python"][1], results["compiled"][1])
        speedup = results["python"][0] / results["compiled"][0]
        print(f"bit-identical outputs: {same}")
        print(f"speedup: {speedup:.1f}x")


if __name__ == "__main__":
    main()
