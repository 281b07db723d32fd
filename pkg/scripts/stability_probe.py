"""Norm histories just below and just above the sharp critical time step.

    python3 scripts/stability_probe.py --kernel laplace --c 10 --n 64
"""
import argparse

import numpy as np

from nonlocal_euler import GaussianBump, InfiniteKernel, SchemeConfig, critical_timestep, periodize, run
from nonlocal_euler.analysis import is_monotone, worst_mode_data


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kernel", choices=["gaussian", "laplace"], default="gaussian")
    ap.add_argument("--c", type=float, default=10.0)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--steps", type=int, default=500)
    args = ap.parse_args()
    kernel = getattr(InfiniteKernel, args.kernel)(args.c)
    pk = periodize(kernel, args.n)
    rep = critical_timestep(pk)
    print(f"{pk.tag} N={args.n}: sharp dt* = {rep.dt_star_sharp:.6f}, conservative dt* = "
          f"{rep.dt_star_conservative}, worst mode {rep.worst_mode}")
    for factor in (0.5, 0.9, 1.0, 1.1, 1.5):
        dt = factor * rep.dt_star_sharp
        for label, u0 in (("bump", GaussianBump().sample(args.n)), ("worst", worst_mode_data(pk))):
            res = run(u0, pk, SchemeConfig(args.n, dt, args.steps), snapshot_every=args.steps, allow_blowup=True)
            norms = np.asarray(res.norm_history)
            print(f"  dt={dt:8.4f} ({factor:.2f} dt*) {label:5s}: monotone={is_monotone(norms)!s:5s} "
                  f"final/initial={norms[-1] / norms[0]:.3e}")


if __name__ == "__main__":
    main()
