"""Command-line front end.

Exit codes: 0 success, 2 config error, 3 assumption failure under ``--strict``,
4 numerical blowup without ``--allow-blowup``.

The environment variable ``NONLOCAL_EULER_SEED`` is reserved for future
stochastic features and currently ignored.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (convergence_sweep, critical_timestep, fit_rate, is_monotone,
                       write_records_csv, write_rates_json)
from .config import RunConfig, load_config
from .errors import ConfigError, InsufficientData, DegenerateVariation
from .kernels import check_assumptions
from .scheme import SchemeConfig, run

log = logging.getLogger("nonlocal_euler")

EXIT_OK, EXIT_CONFIG, EXIT_ASSUMPTION, EXIT_BLOWUP = 0, 2, 3, 4


@dataclass
class RunManifest:
    command: str
    config_digest: str
    tool_version: str
    outputs: list = field(default_factory=list)
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    def write(self, out: Path) -> None:
        path = out / "manifest.json"
        self.outputs.append(path.name)
        missing = [p for p in self.outputs[:-1] if not (out / p).exists()]
        if missing:
            raise RuntimeError(f"manifest lists missing outputs: {missing}")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    raise TypeError(type(v))


def _finite(v: float):
    return v if math.isfinite(v) else str(v)


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def cmd_kernel(cfg: RunConfig, out: Path, args) -> tuple[int, RunManifest]:
    pk = cfg.kernel.build(cfg.n_points)
    report = check_assumptions(pk)
    man = RunManifest("kernel", cfg.digest(), __version__)

    with open(out / "kernel_samples.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "x_j", "value"])
        for j, v in enumerate(pk.samples):
            w.writerow([j, repr(j / pk.n_points), repr(float(v))])
    n = pk.n_points
    M = pk.fourier_coeffs.max_mode
    with open(out / "kernel_spectrum.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "fourier_coeff", "dft_value"])
        for k in range(-M, M + 1):
            dv = repr(pk.dft_value(k)) if -n // 2 < k <= n // 2 else ""
            w.writerow([k, repr(float(pk.fourier_coeffs[k])), dv])
    report.to_json(out / "assumptions.json")
    man.outputs += ["kernel_samples.csv", "kernel_spectrum.csv", "assumptions.json"]
    man.details = {"kernel": pk.tag, "n_points": n, "truncation_radius": pk.truncation_radius,
                   "assumptions_ok": report.overall}
    if args.strict and not report.overall:
        return EXIT_ASSUMPTION, man
    return EXIT_OK, man


def cmd_simulate(cfg: RunConfig, out: Path, args) -> tuple[int, RunManifest]:
    n = cfg.n_points
    pk = cfg.kernel.build(n)
    man = RunManifest("simulate", cfg.digest(), __version__)
    if args.strict and not pk.assumptions.overall:
        return EXIT_ASSUMPTION, man
    u0 = cfg.initial.build().sample(n)
    every = args.snapshot_every or cfg.scheme.snapshot_every
    res = run(u0, pk, SchemeConfig(n, cfg.scheme.dt, cfg.scheme.n_steps), snapshot_every=every,
              allow_blowup=True, method=cfg.scheme.method)
    res.to_csv(out / "snapshots.csv")
    res.to_json(out / "snapshots.json")
    with open(out / "norms.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "norm"])
        for step, v in enumerate(res.norm_history):
            w.writerow([step, repr(float(v))])
    man.outputs += ["snapshots.csv", "snapshots.json", "norms.csv"]
    rep = critical_timestep(pk)
    man.details = {
        "kernel": pk.tag, "initial": cfg.initial.build().tag, "n_points": n, "dt": cfg.scheme.dt,
        "n_steps": cfg.scheme.n_steps, "blowup": res.blowup, "blowup_step": res.blowup_step,
        "norm_monotone": is_monotone(res.norm_history), "dt_star_sharp": _finite(rep.dt_star_sharp),
    }
    allow = args.allow_blowup or cfg.scheme.allow_blowup
    if res.blowup and not allow:
        return EXIT_BLOWUP, man
    return EXIT_OK, man


def cmd_stability(cfg: RunConfig, out: Path, args) -> tuple[int, RunManifest]:
    pk = cfg.kernel.build(cfg.n_points)
    man = RunManifest("stability", cfg.digest(), __version__)
    rep = critical_timestep(pk)
    dts = list(cfg.stability.probe_dts)
    if math.isfinite(rep.dt_star_sharp):
        dts += [f * rep.dt_star_sharp for f in cfg.stability.probe_factors]
    for dt in sorted(set(dts)):
        rep.probe(dt, cfg.stability.n_steps)
    data = rep.to_dict()
    data["dt_star_sharp"] = _finite(rep.dt_star_sharp)
    _write_json(out / "stability.json", data)
    man.outputs.append("stability.json")
    man.details = {"kernel": pk.tag, "assumptions_ok": rep.assumptions_ok}
    if args.strict and not rep.assumptions_ok:
        return EXIT_ASSUMPTION, man
    return EXIT_OK, man


def _fit_entry(records, axis):
    if axis == "h":
        fixed = min(r.dt for r in records)
        pick = [r for r in records if r.dt == fixed]
    else:
        fixed = max(r.n_points for r in records)
        pick = [r for r in records if r.n_points == fixed]
    held = {"dt": fixed} if axis == "h" else {"N": fixed}
    try:
        fit = fit_rate(pick, axis)
    except (InsufficientData, DegenerateVariation) as exc:
        return {"axis": axis, "error": type(exc).__name__, "message": str(exc), "held_fixed": held}
    d = fit.to_dict()
    d["held_fixed"] = held
    return d


def cmd_converge(cfg: RunConfig, out: Path, args) -> tuple[int, RunManifest]:
    man = RunManifest("converge", cfg.digest(), __version__)
    kernel = cfg.kernel.infinite()
    jobs = args.jobs or cfg.sweep.jobs
    all_records, rates = [], {}
    for fam in cfg.sweep.families:
        data = cfg.initial.build(fam)
        log.info("sweep %s: grids=%s dts=%s", fam, cfg.sweep.grids, cfg.sweep.dts)
        recs = convergence_sweep(kernel, data, cfg.sweep.t_final, cfg.sweep.grids, cfg.sweep.dts,
                                 cfg.kernel.tail_tol, jobs=jobs)
        all_records += recs
        rates[data.tag] = {"h": _fit_entry(recs, "h"), "dt": _fit_entry(recs, "dt")}
    write_records_csv(all_records, out / "errors.csv")
    write_rates_json(rates, out / "rates.json")
    man.outputs += ["errors.csv", "rates.json"]
    blown = [(r.n_points, r.dt, r.initial_family) for r in all_records if r.blowup]
    man.details = {"kernel": kernel.tag, "families": cfg.sweep.families, "cells": len(all_records),
                   "blowup": bool(blown), "blowup_cells": blown}
    allow = args.allow_blowup or cfg.scheme.allow_blowup
    if blown and not allow:
        return EXIT_BLOWUP, man
    return EXIT_OK, man


COMMANDS = {"kernel": cmd_kernel, "simulate": cmd_simulate, "stability": cmd_stability, "converge": cmd_converge}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--strict", action="store_true", help="exit 3 if kernel assumptions fail")
    common.add_argument("--allow-blowup", action="store_true", help="record non-finite runs instead of exit 4")
    common.add_argument("--jobs", type=int, default=0, help="parallel sweep workers")
    common.add_argument("--snapshot-every", type=int, default=0, help="snapshot cadence for simulate")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override a config entry (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="nonlocal-euler", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("kernel", parents=[common], help="periodized kernel samples, spectra and A1-A5 report")
    sub.add_parser("simulate", parents=[common], help="run the forward Euler scheme")
    sub.add_parser("stability", parents=[common], help="critical time step and amplification probes")
    sub.add_parser("converge", parents=[common], help="error sweep over grid sizes and time steps")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args.set)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    try:
        code, man = COMMANDS[args.command](cfg, out, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    man.wall_time = time.perf_counter() - t0
    man.details["exit_code"] = code
    man.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
