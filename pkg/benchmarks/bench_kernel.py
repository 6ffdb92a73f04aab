"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernel.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from pinfilab import _kernel
from pinfilab.params import NormalizedParams, market_from_normalized
from pinfilab.phase import GridSpec, sweep
from pinfilab.simulation import Role, RoleModel, SimConfig, run

OPEN_BAND = NormalizedParams(A=0.3, B=0.7, C=1.3, inv_depth=0.001)

CASES = {
    "ss-only run (26k ticks)": SimConfig(
        market_from_normalized(OPEN_BAND, x=1.3), 1.3, 0.01, 1e5, roles=frozenset({Role.SS})),
    "reward-aware run (9.5k ticks)": SimConfig(
        market_from_normalized(OPEN_BAND, x=1.0, g=0.75), 1.0, 0.01, 1e5, role_model=RoleModel.REWARD_AWARE),
}
GRID = GridSpec(0.1, 2.0, 400, 0.0, 1.5, 400)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    found = _kernel.backends()
    if "cython" not in found:
        print("compiled kernel not built; only the Python backend is available")
    print(f"{'case':34s}" + "".join(f"{name:>12s}" for name in found) + "     speedup")
    jobs = {label: (lambda b, cfg=cfg: run(cfg, backend=b)) for label, cfg in CASES.items()}
    jobs["phase grid 400x400"] = lambda b: sweep(GRID, OPEN_BAND, backend=b)
    for label, job in jobs.items():
        times = {name: best_of(lambda: job(name), args.repeat) for name in found}
        row = f"{label:34s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times.values())
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:9.1f}x"
        print(row)
    # parity on the benchmark cases
    if "cython" in found:
        for cfg in CASES.values():
            assert run(cfg, backend="cython").equals(run(cfg, backend="python"))
        a = sweep(GRID, OPEN_BAND, backend="cython").codes
        assert np.array_equal(a, sweep(GRID, OPEN_BAND, backend="python").codes)
        print("outputs bitwise identical across backends")


if __name__ == "__main__":
    main()
