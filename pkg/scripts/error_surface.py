"""Reproduce the (N, dt) error surfaces for smooth and kinked data and fit rates.

Writes errors.csv and rates.json through the CLI, then prints the surfaces
and the error split (spatial vs temporal) along the finest time step.

    python3 scripts/error_surface.py --config configs/error_surface.ini --out results/error_surface
"""
import argparse
import json
import sys
from pathlib import Path

from nonlocal_euler import ExactSolution, GaussianBump, InfiniteKernel, LaplaceBump, error_decomposition, periodize
from nonlocal_euler.analysis import read_records_csv
from nonlocal_euler.cli import main as cli_main


def print_surface(records, family):
    recs = [r for r in records if r.initial_family == family]
    grids = sorted({r.n_points for r in recs})
    dts = sorted({r.dt for r in recs}, reverse=True)
    table = {(r.n_points, r.dt): r.error for r in recs}
    print(f"\n{family}: error at t=1")
    print("   N \\ dt " + "".join(f"{dt:>11.3g}" for dt in dts))
    for n in grids:
        print(f"{n:9d} " + "".join(f"{table[(n, dt)]:11.3e}" for dt in dts))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default="configs/error_surface.ini")
    ap.add_argument("--out", default="results/error_surface")
    ap.add_argument("--jobs", default="1")
    args = ap.parse_args()
    code = cli_main(["converge", "--config", args.config, "--out", args.out, "--jobs", args.jobs])
    if code:
        sys.exit(code)
    out = Path(args.out)
    records = read_records_csv(out / "errors.csv")
    for fam in sorted({r.initial_family for r in records}):
        print_surface(records, fam)
    print("\nfitted rates:")
    print(json.dumps({fam: {ax: {k: v for k, v in fit.items() if k != "points"} for ax, fit in d.items()}
                      for fam, d in json.loads((out / "rates.json").read_text()).items()}, indent=1))

    dt = min(r.dt for r in records)
    steps = round(1.0 / dt)
    print(f"\nerror split at dt={dt:g}:")
    for data in (GaussianBump(), LaplaceBump()):
        for n in sorted({r.n_points for r in records}):
            pk = periodize(InfiniteKernel.gaussian(10.0), n)
            s = error_decomposition(ExactSolution(data, pk), data.sample(n), dt, steps)
            print(f"  {data.tag:14s} N={n:4d} total {s.total:.3e} spatial {s.spatial:.3e} temporal {s.temporal:.3e}")


if __name__ == "__main__":
    main()
