"""Compare the numpy and compiled sampling backends on realistic drop work.

Run from the repository root:

    python3 benchmarks/bench_backends.py [--drops 20]

Both backends produce bitwise identical draws; this measures wall time for
the kernels in isolation and for full network drops.
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np


def _load(name: str):
    module = "fdmimo._kernels" if name == "compiled" else "fdmimo._kernels_py"
    try:
        return importlib.import_module(module)
    except ImportError:
        return None


def _bench_kernels(kernels, repeats: int) -> dict[str, float]:
    key = (0x1234ABCD, 0x9E0FF00D)
    scores = -25.0 * np.log10(
        np.abs(np.random.default_rng(3).normal(300.0, 80.0, size=(10, 19))) + 1.0
    )
    timings = {}

    start = time.perf_counter()
    for _ in range(repeats):
        for cell in range(19):
            kernels.sample_hex_positions(*key, 0, cell, 10, 250.0, 288.675,
                                         0.5773502691896258, 100.0, 0.0, 0.0)
    timings["positions"] = (time.perf_counter() - start) / repeats

    start = time.perf_counter()
    for _ in range(repeats):
        for cell in range(19):
            kernels.sample_conditioned_shadows(*key, 2, cell, scores, 0, 8.0)
    timings["shadows"] = (time.perf_counter() - start) / repeats

    start = time.perf_counter()
    for _ in range(repeats):
        for cell in range(19):
            kernels.sample_plane_normals(*key, 3, cell, 10, 10)
    timings["normals"] = (time.perf_counter() - start) / repeats
    return timings


def _bench_drops(backend: str, n_drops: int) -> float:
    import fdmimo._backend as backend_module
    from fdmimo.montecarlo import run_drop
    from fdmimo.scenario import default_scenario

    kernels = _load(backend)
    backend_module.kernels = kernels  # redirect without re-importing the package

    import fdmimo.channel as channel

    channel.kernels = kernels
    scenario = default_scenario()
    start = time.perf_counter()
    for drop in range(n_drops):
        run_drop(scenario, drop)
    return (time.perf_counter() - start) / n_drops


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--drops", type=int, default=20,
                        help="network drops per backend for the end-to-end timing")
    parser.add_argument("--repeats", type=int, default=50,
                        help="repeats per kernel microbenchmark")
    args = parser.parse_args()

    available = {name: _load(name) for name in ("python", "compiled")}
    if available["compiled"] is None:
        print("compiled backend not built; run pip install -e . first")

    print(f"{'kernel':<12}", end="")
    for name in available:
        print(f"{name:>14}", end="")
    print(f"{'speedup':>10}")

    rows: dict[str, dict[str, float]] = {}
    for name, kernels in available.items():
        if kernels is None:
            continue
        for kernel, seconds in _bench_kernels(kernels, args.repeats).items():
            rows.setdefault(kernel, {})[name] = seconds

    for kernel, per_backend in rows.items():
        print(f"{kernel:<12}", end="")
        for name in available:
            if name in per_backend:
                print(f"{per_backend[name] * 1e6:>12.1f}us", end="")
            else:
                print(f"{'-':>14}", end="")
        if len(per_backend) == 2:
            print(f"{per_backend['python'] / per_backend['compiled']:>9.1f}x")
        else:
            print()

    print()
    drop_times = {}
    for name, kernels in available.items():
        if kernels is None:
            continue
        drop_times[name] = _bench_drops(name, args.drops)
        print(f"full drop, {name:<9}: {drop_times[name] * 1e3:8.2f} ms")
    if len(drop_times) == 2:
        print(f"end-to-end speedup : {drop_times['python'] / drop_times['compiled']:8.1f}x")


if __name__ == "__main__":
    main()
