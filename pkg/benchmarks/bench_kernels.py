"""Time the numpy fallback against the compiled kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case is run through the public API with ``backend=`` forced, and the two
results are compared so a speedup never hides a wrong answer.
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from spontaneous_entropy import _backend
from spontaneous_entropy.dynamics import evolve
from spontaneous_entropy.entropy import diagonal_entropy
from spontaneous_entropy.modes import enumerate_1d, shell_entropy_3d
from spontaneous_entropy.params import PhysicalParams


def _best(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    m = enumerate_1d(PhysicalParams(), 50)  # 4000 modes
    probs = np.random.default_rng(0).random(2_000_000)
    probs /= probs.sum()
    p3 = PhysicalParams(dimension=3, dipole_d=math.sqrt(3 * math.pi * 0.02), box_length=2 * math.pi * 35.21)
    return {
        "integrate (4000 modes, 5/Gamma)": (
            lambda b: evolve(m, t_final=5e3, n_samples=51, keep_modes=False, backend=b).c0,
            lambda a, b: float(np.max(np.abs(a - b))),
        ),
        "plogp_sum (2e6 entries)": (
            lambda b: diagonal_entropy(probs, backend=b),
            lambda a, b: abs(a - b),
        ),
        "shell_entropy (3D, ~1.5e6 modes)": (
            lambda b: shell_entropy_3d(p3, 30, backend=b).entropy,
            lambda a, b: abs(a - b),
        ),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _backend.compiled is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    print(f"{'kernel':36s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s} {'max diff':>10s}")
    for label, (run, diff) in cases().items():
        t_py, r_py = _best(lambda: run("python"), args.repeat)
        t_c, r_c = _best(lambda: run("compiled"), args.repeat)
        print(f"{label:36s} {t_py:10.3f} {t_c:11.3f} {t_py / t_c:7.1f}x {diff(r_py, r_c):10.1e}")


if __name__ == "__main__":
    main()
