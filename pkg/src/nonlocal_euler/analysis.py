"""Stability reports, error measurement, convergence sweeps and rate fits."""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (DegenerateVariation, InsufficientData, TailNotResolved)
from .exact import ExactSolution, InitialData, exact_at, semidiscrete_exact
from .kernels import InfiniteKernel, PeriodicKernel, periodize
from .scheme import EvolutionResult, SchemeConfig, amplification_factors, run, spectral_evolve
from .spectral import GridFunction, dft, discrete_norm, grid_points, idft

MONOTONE_RTOL = 1e-12
CONSERVATIVE_DT = 1.0  # 2/C with C = 2


# -- stability -----------------------------------------------------------------

@dataclass
class StabilityReport:
    dt_star_sharp: float
    dt_star_conservative: float
    max_gap: float
    worst_mode: int
    assumptions_ok: bool
    kernel: PeriodicKernel = field(repr=False)
    probes: dict = field(default_factory=dict)

    def max_abs_g(self, dt: float) -> float:
        return float(np.max(np.abs(amplification_factors(self.kernel, dt))))

    def probe(self, dt: float, n_steps: int = 200) -> dict:
        """Record ``max|g|`` and an empirical monotonicity run at ``dt``."""
        data = worst_mode_data(self.kernel)
        monotone, _ = norm_monotonicity_probe(self.kernel, data, dt, n_steps)
        entry = {"dt": float(dt), "max_abs_g": self.max_abs_g(dt), "empirical_monotone": bool(monotone)}
        self.probes[float(dt)] = entry
        return entry

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel.tag,
            "n_points": self.kernel.n_points,
            "dt_star_sharp": self.dt_star_sharp,
            "dt_star_conservative": self.dt_star_conservative,
            "max_gap": self.max_gap,
            "worst_mode": self.worst_mode,
            "assumptions_ok": self.assumptions_ok,
            "probes": [self.probes[k] for k in sorted(self.probes)],
        }


def critical_timestep(kernel: PeriodicKernel) -> StabilityReport:
    """Sharp threshold ``2 / max_k (J~_0 - J~_k)`` next to the conservative ``2/C = 1``."""
    gaps = kernel.gaps
    n = kernel.n_points
    max_gap = float(np.max(gaps))
    # gaps of a smooth kernel saturate and tie at round-off; prefer the highest |k|
    ks = np.fft.fftfreq(n, 1.0 / n).astype(int)
    ks[n // 2] = n // 2
    tied = np.flatnonzero(gaps >= max_gap * (1 - 1e-14))
    worst = int(ks[tied[np.argmax(np.abs(ks[tied]) + 0.5 * (ks[tied] > 0))]])
    return StabilityReport(
        dt_star_sharp=2.0 / max_gap if max_gap > 0 else math.inf,
        dt_star_conservative=CONSERVATIVE_DT,
        max_gap=max_gap,
        worst_mode=worst,
        assumptions_ok=kernel.assumptions.overall,
        kernel=kernel,
    )


def worst_mode_data(kernel: PeriodicKernel) -> GridFunction:
    """Real cosine in the mode with the largest gap, i.e. smallest ``g``."""
    k = critical_timestep(kernel).worst_mode
    return GridFunction(np.cos(2 * np.pi * k * grid_points(kernel.n_points)))


def is_monotone(norms: Sequence[float], rtol: float = MONOTONE_RTOL) -> bool:
    a = np.asarray(norms, dtype=float)
    if not np.all(np.isfinite(a)):
        return False
    return bool(np.all(a[1:] <= a[:-1] * (1 + rtol)))


def norm_monotonicity_probe(kernel: PeriodicKernel, initial: GridFunction, dt: float,
                            n_steps: int) -> tuple[bool, list]:
    if dt == 0 or n_steps == 0:
        norm = discrete_norm(initial)
        return True, [norm] * (n_steps + 1)
    res = run(initial, kernel, SchemeConfig(kernel.n_points, dt, n_steps),
              snapshot_every=max(n_steps, 1), allow_blowup=True)
    return is_monotone(res.norm_history) and not res.blowup, res.norm_history


# -- errors --------------------------------------------------------------------

def error_at(exact: ExactSolution, numeric: EvolutionResult, step: int) -> float:
    """``||u(., t_m) - U^m||_h`` at ``t_m = step * dt``."""
    snap = numeric.snapshot(step)
    t = step * numeric.config.dt
    return discrete_norm(exact_at(exact, t, snap.n_points) - snap)


@dataclass(frozen=True)
class ErrorSplit:
    total: float
    spatial: float
    temporal: float


def error_decomposition(exact: ExactSolution, initial: GridFunction, dt: float, n_steps: int) -> ErrorSplit:
    """Split the fully discrete error through the semidiscrete solution.

    ``spatial`` is exact vs semidiscrete, ``temporal`` is semidiscrete vs
    Euler (evaluated spectrally); ``total <= spatial + temporal``.
    """
    pk = exact.kernel
    t = n_steps * dt
    s0 = dft(initial)
    semi = idft(semidiscrete_exact(s0, pk, t))
    full = idft(spectral_evolve(s0, pk, dt, n_steps))
    ex = exact_at(exact, t, pk.n_points)
    if initial.is_real:
        semi, full = GridFunction(semi.values.real), GridFunction(full.values.real)
    return ErrorSplit(discrete_norm(ex - full), discrete_norm(ex - semi), discrete_norm(semi - full))


# -- sweeps --------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRecord:
    n_points: int
    dt: float
    n_steps: int
    t_final: float
    error: float
    initial_family: str
    kernel_tag: str
    blowup: bool = False

    @property
    def h(self) -> float:
        return 1.0 / self.n_points


CSV_COLUMNS = ["N", "h", "dt", "t_final", "error", "family", "kernel", "blowup"]


def write_records_csv(records: Sequence[ConvergenceRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([r.n_points, repr(r.h), repr(float(r.dt)), repr(float(r.t_final)),
                        repr(float(r.error)), r.initial_family, r.kernel_tag, str(r.blowup).lower()])


def read_records_csv(path) -> list:
    with open(path, newline="") as fh:
        return [ConvergenceRecord(int(row["N"]), float(row["dt"]), int(round(float(row["t_final"]) / float(row["dt"]))),
                                  float(row["t_final"]), float(row["error"]), row["family"], row["kernel"],
                                  row["blowup"] == "true")
                for row in csv.DictReader(fh)]


def convergence_sweep(kernel: InfiniteKernel, initial: InitialData, t_final: float = 1.0,
                      grid_list: Sequence[int] = (32, 64, 128, 256), dt_list: Sequence[float] = (1 / 64,),
                      tail_tol: float = 1e-14, jobs: int = 1) -> list:
    """Error at ``t_final`` for every ``(N, dt)`` pair, sorted by ``(N, dt)``.

    ``n_steps = round(t_final / dt)`` and the reference solution is taken at
    the achieved time ``n_steps * dt``.
    """
    kernels = {n: periodize(kernel, n, tail_tol) for n in sorted(set(grid_list))}
    exacts = {n: ExactSolution(initial, pk) for n, pk in kernels.items()}
    u0 = {n: initial.sample(n) for n in kernels}

    def cell(args):
        n, dt = args
        steps = int(round(t_final / dt))
        res = run(u0[n], kernels[n], SchemeConfig(n, dt, steps),
                  snapshot_every=max(steps, 1), allow_blowup=True)
        if res.blowup:
            err = math.inf
        else:
            err = error_at(exacts[n], res, steps)
        return ConvergenceRecord(n, float(dt), steps, steps * dt, err, initial.tag, kernels[n].tag, res.blowup)

    cells = sorted({(int(n), float(dt)) for n in grid_list for dt in dt_list})
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(cell, cells))
    else:
        records = [cell(c) for c in cells]
    return sorted(records, key=lambda r: (r.n_points, r.dt))


# -- rate fitting --------------------------------------------------------------

@dataclass
class RateFit:
    axis: str
    slope: float
    intercept: float
    r_squared: float
    records_used: list
    full_slope: float
    full_r_squared: float
    floor_limited: bool = False

    @property
    def effective_rate(self) -> float:
        """The slope, or ``inf`` when the axis contributes no measurable error."""
        return math.inf if self.floor_limited else self.slope

    def to_dict(self) -> dict:
        def num(v):
            return v if math.isfinite(v) else str(v)
        return {
            "axis": self.axis,
            "slope": num(self.slope),
            "intercept": num(self.intercept),
            "r2": num(self.r_squared),
            "full_slope": num(self.full_slope),
            "full_r2": num(self.full_r_squared),
            "floor_limited": self.floor_limited,
            "points": [[_axis_value(r, self.axis), r.error] for r in self.records_used],
        }


def _axis_value(r: ConvergenceRecord, axis: str) -> float:
    return r.h if axis == "h" else r.dt


def _lsq(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    return float(slope), float(intercept), min(max(r2, 0.0), 1.0)


def fit_rate(records: Sequence[ConvergenceRecord], axis: str,
             filter: Optional[Callable[[ConvergenceRecord], bool]] = None,
             finest_fraction: float = 0.5, floor_rtol: float = 1e-3) -> RateFit:
    """Least-squares slope of ``log(error)`` against ``log(h)`` or ``log(dt)``.

    The reported slope uses the finest ``finest_fraction`` of the points
    (at least three); the full-range fit is reported alongside. A fit is
    ``floor_limited`` when the errors vary by less than ``floor_rtol``
    relative across the points, or any error is exactly zero.
    """
    if axis not in ("h", "dt"):
        raise ValueError(f"axis must be 'h' or 'dt', got {axis!r}")
    recs = [r for r in records if (filter is None or filter(r)) and not r.blowup]
    if len(recs) < 3:
        raise InsufficientData(f"need >= 3 records, have {len(recs)}")
    other = [r.dt if axis == "h" else r.n_points for r in recs]
    if len(set(other)) > 1:
        raise DegenerateVariation(f"{'dt' if axis == 'h' else 'N'} is not held fixed: {sorted(set(other))}")
    if len({_axis_value(r, axis) for r in recs}) < 3:
        raise InsufficientData("need >= 3 distinct values along the fit axis")
    recs.sort(key=lambda r: _axis_value(r, axis))
    errs = np.array([r.error for r in recs])
    if np.any(errs <= 0):
        return RateFit(axis, math.nan, math.nan, 0.0, recs, math.nan, 0.0, True)
    x = np.log([_axis_value(r, axis) for r in recs])
    y = np.log(errs)
    full = _lsq(x, y)
    m = max(3, math.ceil(len(recs) * finest_fraction))
    slope, intercept, r2 = _lsq(x[:m], y[:m])
    floor = float((errs.max() - errs.min()) / errs.max()) < floor_rtol
    return RateFit(axis, slope, intercept, r2, recs[:m], full[0], full[2], floor)


def write_rates_json(fits: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fits, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- aliasing ------------------------------------------------------------------

@dataclass
class AliasingEstimate:
    alpha: float
    kind: str  # "finite", "band_limited" or "super_polynomial"
    grid_list: list
    energies: list
    shells: list


def aliasing_energy(initial: InitialData, n_points: int, shell_rtol: float = 1e-3,
                    max_shells: int = 4096, shells: Optional[int] = None) -> tuple[float, int]:
    """``A(N) = sum_{k} |sum_{s != 0} u^_{k+sN}|^2`` over the grid modes.

    Shells ``|s| = 1, 2, ...`` are added until the newest one changes the
    total by less than ``shell_rtol`` (or exactly ``shells`` of them).
    """
    n = n_points
    ks = np.arange(-n // 2 + 1, n // 2 + 1)
    acc = np.zeros(n, dtype=complex)
    prev = 0.0
    S = 0
    limit = shells if shells is not None else max_shells
    while S < limit:
        S += 1
        acc = acc + initial.coefficients(ks + S * n) + initial.coefficients(ks - S * n)
        total = float(np.sum(np.abs(acc) ** 2))
        if shells is None:
            if total == 0.0 and initial.max_mode is not None and S * n - n // 2 > initial.max_mode:
                return 0.0, S
            if total == 0.0 and prev == 0.0 and S >= 2:
                # coefficients underflow: nothing left to alias
                return 0.0, S
            if total > 0 and abs(total - prev) < shell_rtol * total:
                return total, S
        prev = total
    if shells is None:
        raise TailNotResolved(f"aliasing sum not converged after {max_shells} shells at N={n}")
    return total, S


def aliasing_exponent(initial: InitialData, grid_list: Sequence[int], shell_rtol: float = 1e-3,
                      shell_factor: int = 1) -> AliasingEstimate:
    """Fit ``A(N) ~ dx^(2 alpha)`` and return ``alpha``.

    ``shell_factor`` multiplies the adaptively chosen shell count, to check
    that the estimate is insensitive to truncation.
    """
    grids = sorted(int(n) for n in grid_list)
    energies, shells = [], []
    for n in grids:
        A, S = aliasing_energy(initial, n, shell_rtol)
        if shell_factor != 1 and A > 0:
            A, S = aliasing_energy(initial, n, shells=S * shell_factor)
        energies.append(A)
        shells.append(S)
    E = np.array(energies)
    if np.all(E == 0):
        return AliasingEstimate(math.inf, "band_limited", grids, energies, shells)
    if np.any(E == 0) or np.any(E < 1e-300):
        kind = "band_limited" if initial.max_mode is not None else "super_polynomial"
        return AliasingEstimate(math.inf, kind, grids, energies, shells)
    x = np.log(1.0 / np.array(grids, dtype=float))
    y = np.log(E)
    local = np.diff(y) / np.diff(x)
    if len(local) >= 2 and local[-1] > 2 * local[0] and local[-1] > 8:
        return AliasingEstimate(math.inf, "super_polynomial", grids, energies, shells)
    slope = float(np.polyfit(x, y, 1)[0])
    return AliasingEstimate(slope / 2, "finite", grids, energies, shells)
