"""Timing comparison of the python and compiled grid kernels.

Runs zin_grid and residual_grid on every importable backend over the default
sweep window and prints the best-of-N wall time per call plus the speedup.
"""

import argparse
import time

import numpy as np

from ifatuner.antmodel import pack_params
from ifatuner.config import default_config
from ifatuner.kernels import available_backends


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20001, help="grid points per call")
    ap.add_argument("--repeats", type=int, default=7, help="timed repeats, best kept")
    args = ap.parse_args()

    cfg = default_config()
    params = pack_params(cfg.geometry, cfg.resonator)
    freqs = np.linspace(cfg.f_start, cfg.f_stop, args.points)

    backends = available_backends()
    print(
        f"backends: {', '.join(backends)}; grid {args.points} points, "
        f"best of {args.repeats}"
    )
    for kernel in ("zin_grid", "residual_grid"):
        row = {}
        for name, mod in backends.items():
            fn = getattr(mod, kernel)
            fn(freqs, params)
            row[name] = _best_of(lambda: fn(freqs, params), args.repeats)
        cells = "  ".join(f"{name}: {dt * 1e3:8.3f} ms" for name, dt in row.items())
        if "python" in row and "compiled" in row:
            cells += f"  speedup: {row['python'] / row['compiled']:5.1f}x"
        print(f"{kernel:<14} {cells}")

    # Scalar hot path: root bracketing and brentq call residual_im once per
    # function evaluation, so per-call overhead dominates there.
    scalar_freqs = np.linspace(cfg.f_start, cfg.f_stop, 2001)
    row = {}
    for name, mod in backends.items():
        fn = mod.residual_im
        fn(1e9, params)
        row[name] = _best_of(lambda: [fn(float(f), params) for f in scalar_freqs], args.repeats)
    cells = "  ".join(f"{name}: {dt * 1e3:8.3f} ms" for name, dt in row.items())
    if "python" in row and "compiled" in row:
        cells += f"  speedup: {row['python'] / row['compiled']:5.1f}x"
    print(f"{'residual_im*2k':<14} {cells}")


if __name__ == "__main__":
    main()
