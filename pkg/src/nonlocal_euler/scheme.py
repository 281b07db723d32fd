"""Midpoint-quadrature semidiscretization and the forward Euler scheme.

Semidiscrete system::

    dU_j/dt = h sum_k J(x_j - x_k) (U_k - U_j)

Euler step::

    U_j^{n+1} = U_j^n (1 - h dt sum_r J(x_j - x_r)) + h dt sum_r J(x_j - x_r) U_r^n

In Fourier space mode ``k`` is multiplied by ``g = 1 + dt (J~_k - J~_0)``.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import GridMismatch, MissingSnapshot, NonFinite
from .kernels import PeriodicKernel, dft_gap
from .spectral import GridFunction, SpectralField, check_even, discrete_norm, dft


@dataclass(frozen=True)
class SchemeConfig:
    n_points: int
    dt: float
    n_steps: int
    epsilon: float = 1.0

    def __post_init__(self):
        check_even(self.n_points)
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 0 or int(self.n_steps) != self.n_steps:
            raise ValueError(f"n_steps must be a nonnegative integer, got {self.n_steps}")
        if self.epsilon != 1.0:
            raise ValueError("only epsilon = 1 is supported")

    @property
    def t_final(self) -> float:
        return self.n_steps * self.dt


@dataclass
class EvolutionResult:
    config: SchemeConfig
    snapshots: list = field(default_factory=list)
    norm_history: list = field(default_factory=list)
    spectral_snapshots: Optional[list] = None
    blowup_step: Optional[int] = None

    @property
    def blowup(self) -> bool:
        return self.blowup_step is not None

    def snapshot(self, step: int) -> GridFunction:
        for n, g in self.snapshots:
            if n == step:
                return g
        raise MissingSnapshot(step)

    @property
    def final(self) -> tuple:
        return self.snapshots[-1]

    def to_csv(self, path) -> None:
        complex_data = any(not g.is_real for _, g in self.snapshots)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "j", "x_j", "value"] + (["value_imag"] if complex_data else []))
            for n, g in self.snapshots:
                vals = g.values.astype(complex)
                for j, (xj, v) in enumerate(zip(g.x, vals)):
                    row = [n, j, repr(float(xj)), repr(float(v.real))]
                    if complex_data:
                        row.append(repr(float(v.imag)))
                    w.writerow(row)

    def to_json(self, path) -> None:
        series = []
        for n, g in self.snapshots:
            entry = {"step": n, "t": n * self.config.dt, "values": [float(v) for v in np.real(g.values)]}
            if not g.is_real:
                entry["values_imag"] = [float(v) for v in np.imag(g.values)]
            series.append(entry)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"n_points": self.config.n_points, "dt": self.config.dt, "snapshots": series}, fh)
            fh.write("\n")


def _check_grid(U: GridFunction, kernel: PeriodicKernel) -> None:
    if U.n_points != kernel.n_points:
        raise GridMismatch(f"grid has {U.n_points} points, kernel {kernel.n_points}")


def semidiscrete_rhs(U: GridFunction, kernel: PeriodicKernel, method: str = "direct") -> GridFunction:
    """Right-hand side of the semidiscrete system.

    ``"direct"`` forms the quadrature sum with the circulant kernel matrix;
    ``"fft"`` computes ``h (J * U)_j - J~_0 U_j`` with a circular convolution.
    """
    _check_grid(U, kernel)
    u = U.values
    h = kernel.h
    if method == "direct":
        A = kernel.circulant
        return GridFunction(h * (A @ u) - h * A.sum(axis=1) * u)
    if method == "fft":
        conv = np.fft.ifft(np.fft.fft(kernel.samples) * np.fft.fft(u))
        if not np.iscomplexobj(u):
            conv = conv.real
        return GridFunction(h * conv - kernel.dft_values[0] * u)
    raise ValueError(f"unknown method {method!r}")


def euler_matrix(kernel: PeriodicKernel, dt: float) -> np.ndarray:
    """The one-step matrix ``diag(1 - h dt rowsum(A)) + h dt A``."""
    A = kernel.circulant
    h = kernel.h
    E = h * dt * A
    E[np.diag_indices_from(E)] += 1 - h * dt * A.sum(axis=1)
    return E


def euler_step(U: GridFunction, kernel: PeriodicKernel, dt: float, method: str = "direct") -> GridFunction:
    _check_grid(U, kernel)
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    if method == "direct":
        A = kernel.circulant
        h = kernel.h
        u = U.values
        return GridFunction(u * (1 - h * dt * A.sum(axis=1)) + h * dt * (A @ u))
    return GridFunction(U.values + dt * semidiscrete_rhs(U, kernel, method).values)


def amplification_factor(kernel: PeriodicKernel, dt: float, k: int) -> float:
    return 1.0 - dt * dft_gap(kernel, k)


def amplification_factors(kernel: PeriodicKernel, dt: float) -> np.ndarray:
    """``g(h, dt, k)`` for all grid modes, in FFT storage order."""
    return 1.0 - dt * kernel.gaps


def spectral_evolve(initial_spectrum: SpectralField, kernel: PeriodicKernel, dt: float, n: int) -> SpectralField:
    if initial_spectrum.n_points != kernel.n_points:
        raise GridMismatch(f"spectrum has {initial_spectrum.n_points} modes, kernel {kernel.n_points}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return initial_spectrum.scaled(np.power(amplification_factors(kernel, dt), int(n)))


def run(initial: GridFunction, kernel: PeriodicKernel, config: SchemeConfig, snapshot_every: int = 1,
        record_spectra: bool = False, allow_blowup: bool = False, method: str = "direct") -> EvolutionResult:
    """Iterate the Euler step ``config.n_steps`` times.

    Snapshots are kept every ``snapshot_every`` steps and at the final step;
    the norm is recorded at every step. Non-finite values raise
    :class:`NonFinite` unless ``allow_blowup``, in which case the run stops
    and ``blowup_step`` is set.
    """
    _check_grid(initial, kernel)
    if config.n_points != kernel.n_points:
        raise GridMismatch(f"config has {config.n_points} points, kernel {kernel.n_points}")
    if snapshot_every < 1:
        raise ValueError("snapshot_every must be >= 1")
    result = EvolutionResult(config, spectral_snapshots=[] if record_spectra else None)

    def keep(n, g):
        result.snapshots.append((n, g))
        if record_spectra:
            result.spectral_snapshots.append((n, dft(g)))

    u = initial.values
    if method == "direct":
        E = euler_matrix(kernel, config.dt)
        step = lambda v: E @ v
    else:
        step = lambda v: euler_step(GridFunction(v), kernel, config.dt, method).values

    keep(0, initial)
    result.norm_history.append(discrete_norm(initial))
    h = kernel.h
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, config.n_steps + 1):
            u = step(u)
            if not np.all(np.isfinite(u)):
                if not allow_blowup:
                    raise NonFinite(n)
                result.blowup_step = n
                break
            result.norm_history.append(float(np.sqrt(h * np.sum(np.abs(u) ** 2))))
            if n % snapshot_every == 0 or n == config.n_steps:
                keep(n, GridFunction(u))
    return result
