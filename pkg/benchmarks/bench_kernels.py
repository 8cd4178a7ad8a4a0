"""Compare the compiled integration kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--steps N]

Times the coupled truth/nudged/sensitivity advance for both ODE models on
each backend and reports steps/second plus the speedup. The spectral KSE
stepper has a single (numpy/FFT) implementation; its throughput is printed
for context.
"""

import argparse
import time

import numpy as np

from nudgefit import (
    CoupledState,
    IntegratorConfig,
    KuramotoSivashinsky,
    canonical_params,
)
from nudgefit.kernels import ode_py

try:
    from nudgefit.kernels import _ode
except ImportError:
    _ode = None


def time_backend(fn, args, steps, repeats=3):
    best = np.inf
    for _ in range(repeats):
        y = args[0].copy()
        t0 = time.perf_counter()
        fn(y, *args[1:])
        best = min(best, time.perf_counter() - t0)
    return steps / best


def bench_l63(steps):
    gamma = canonical_params()
    c = 0.8 * gamma
    mu = np.full(3, 100.0)
    active = np.array([0, 1, 2], dtype=np.int64)
    rng = np.random.default_rng(0)
    y = rng.standard_normal((5, 3))
    args = (y, gamma, c, mu, active, 1e-3, steps)
    return {name: time_backend(mod.advance_l63, args, steps)
            for name, mod in _backends()}


def bench_l96(steps, with_sens):
    gamma = np.array([0.01, 0.5])
    c = 0.5 * gamma
    d = np.array([0.2, 0.5, 1.0, 2.0, 5.0])
    big = 40
    n = big * 6
    mu = np.zeros(n)
    mu[:big] = 50.0
    active = (np.array([0, 1], dtype=np.int64) if with_sens
              else np.zeros(0, dtype=np.int64))
    rng = np.random.default_rng(1)
    y = rng.standard_normal((2 + len(active), n)) * 0.3
    args = (y, gamma, c, d, 8.0, mu, active, 1e-3, steps, big)
    return {name: time_backend(mod.advance_l96, args, steps)
            for name, mod in _backends()}


def _backends():
    out = [("python", ode_py)]
    if _ode is not None:
        out.insert(0, ("compiled", _ode))
    return out


def bench_kse(steps):
    model = KuramotoSivashinsky()
    gamma = np.ones(3)
    op = model.default_observation()
    cfg = IntegratorConfig(dt=1e-2, mu=25.0, scheme="spectral")
    state = CoupledState(model.field_to_state(model.default_initial_field()),
                         np.zeros(model.grid, dtype=complex), None, 0.0)
    from nudgefit import advance_coupled

    t0 = time.perf_counter()
    advance_coupled(model, state, 0.8 * gamma, gamma, cfg, op, steps * 1e-2, "ds",
                    active=(0, 1, 2))
    return steps / (time.perf_counter() - t0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20000)
    args = ap.parse_args()

    rows = [
        ("lorenz63 (3 sens cols)", bench_l63(args.steps)),
        ("lorenz96 truth+nudged", bench_l96(args.steps, with_sens=False)),
        ("lorenz96 (2 sens cols)", bench_l96(args.steps, with_sens=True)),
    ]
    print(f"{'case':26s} {'compiled':>14s} {'python':>14s} {'speedup':>9s}")
    for name, res in rows:
        comp = res.get("compiled")
        py = res["python"]
        comp_s = f"{comp:,.0f}/s" if comp else "n/a"
        py_s = f"{py:,.0f}/s"
        speed = f"{comp / py:.1f}x" if comp else "-"
        print(f"{name:26s} {comp_s:>14s} {py_s:>14s} {speed:>9s}")
    kse = bench_kse(min(args.steps, 2000))
    print(f"{'kse etdrk4 (3 sens cols)':26s} {'(numpy both)':>14s} {kse:>12,.0f}/s")


if __name__ == "__main__":
    main()
