"""Infinite-line kernels, their periodization onto [0, 1) and the A1-A5 checks."""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import IndexOutOfRange, NonDecayingKernel, QuadratureFailure
from .spectral import FourierCoefficients, check_even, grid_points

DEFAULT_TOL = 1e-10
MAX_RADIUS = 10_000


@dataclass(frozen=True)
class InfiniteKernel:
    """A symmetric, non-negative kernel on the real line.

    Build with :meth:`gaussian`, :meth:`laplace` or :meth:`custom`. ``decay``
    is ``"exponential"`` (``|J(x)| <= K exp(-rate |x|)``) or ``"power"``
    (``|J(x)| <= K |x|^-rate`` with ``rate > 2``).
    """

    family: str
    c: float = 0.0
    sampler: Optional[Callable] = field(default=None, compare=False, repr=False)
    decay_rate: float = 0.0
    decay: str = "exponential"
    transform_func: Optional[Callable] = field(default=None, compare=False, repr=False)
    quad_tol: float = 1e-10

    @classmethod
    def gaussian(cls, c: float) -> "InfiniteKernel":
        if c <= 0:
            raise ValueError("Gaussian width parameter must be positive")
        return cls("gaussian", float(c), decay_rate=float(c))

    @classmethod
    def laplace(cls, c: float) -> "InfiniteKernel":
        if c <= 0:
            raise ValueError("Laplace rate parameter must be positive")
        return cls("laplace", float(c), decay_rate=float(c))

    @classmethod
    def custom(cls, sampler, decay_rate: float, decay: str = "exponential",
               transform=None, quad_tol: float = 1e-10) -> "InfiniteKernel":
        if decay not in ("exponential", "power"):
            raise ValueError(f"unknown decay kind {decay!r}")
        return cls("custom", sampler=sampler, decay_rate=float(decay_rate), decay=decay,
                   transform_func=transform, quad_tol=quad_tol)

    @property
    def tag(self) -> str:
        if self.family == "custom":
            return "custom"
        return f"{self.family}(c={self.c:g})"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "gaussian":
            return np.sqrt(self.c / np.pi) * np.exp(-self.c * x * x)
        if self.family == "laplace":
            return 0.5 * self.c * np.exp(-self.c * np.abs(x))
        return np.asarray(self.sampler(x), dtype=float)

    def tail_bound(self, radius: int) -> float:
        """Upper bound on ``sum_{|r| > R} J(x - r)`` for any ``x`` in [0, 1)."""
        R = float(radius)
        if self.family == "gaussian":
            c = self.c
            return 2 * np.sqrt(c / np.pi) * np.exp(-c * R * R) / -np.expm1(-c * (2 * R + 1))
        if self.family == "laplace":
            c = self.c
            return c * np.exp(-c * R) / -np.expm1(-c)
        if self.decay_rate <= 0 or (self.decay == "power" and self.decay_rate <= 2):
            return np.inf
        edge = float(max(abs(self(R)), abs(self(-R))))
        if self.decay == "exponential":
            return 2 * edge / -np.expm1(-self.decay_rate)
        return 2 * edge * (1 + R / (self.decay_rate - 1))


def continuous_transform(kernel: InfiniteKernel, frequency):
    """``J^(xi) = int J(y) exp(-i xi y) dy``; real because the kernel is even."""
    xi = np.asarray(frequency, dtype=float)
    if kernel.family == "gaussian":
        return np.exp(-xi * xi / (4 * kernel.c))
    if kernel.family == "laplace":
        c2 = kernel.c ** 2
        return c2 / (c2 + xi * xi)
    if kernel.transform_func is not None:
        return np.asarray(kernel.transform_func(xi), dtype=float)
    return np.vectorize(lambda w: _quad_transform(kernel, w), otypes=[float])(xi)


def _quad_transform(kernel: InfiniteKernel, xi: float) -> float:
    f = lambda y: float(kernel(y))
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            # a finite cutoff where the lattice tail bound is negligible keeps
            # the oscillatory rule (QAWO) accurate; slow tails fall back to QAWF
            try:
                upper = float(choose_radius(kernel, 1e-17))
            except NonDecayingKernel:
                upper = np.inf
            if xi == 0:
                val, err = integrate.quad(f, 0, upper, limit=400, epsabs=1e-14, epsrel=1e-12)
            elif np.isfinite(upper):
                val, err = integrate.quad(f, 0, upper, weight="cos", wvar=abs(xi), limit=400,
                                          epsabs=1e-14, epsrel=1e-12)
            else:
                val, err = integrate.quad(f, 0, np.inf, weight="cos", wvar=abs(xi), limlst=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"transform at xi={xi}: {str(exc).splitlines()[0]}") from None
    if not np.isfinite(val) or err > kernel.quad_tol:
        raise QuadratureFailure(f"transform at xi={xi}: error estimate {err:.3g}")
    return 2 * val


@dataclass(frozen=True, eq=False)
class PeriodicKernel:
    """The 1-periodic kernel ``J(x) = sum_r J_inf(x - r)`` sampled on an N-grid.

    ``dft_values`` are the grid transforms ``J~_k`` in FFT storage order;
    ``fourier_coeffs`` are the continuum coefficients ``J^_j`` for
    ``|j| <= M``.
    """

    n_points: int
    samples: np.ndarray
    fourier_coeffs: FourierCoefficients
    dft_values: np.ndarray
    truncation_radius: int
    hat_J0: float
    source: Optional[InfiniteKernel] = None
    label: str = "periodic"

    @property
    def h(self) -> float:
        return 1.0 / self.n_points

    @property
    def tag(self) -> str:
        return self.source.tag if self.source is not None else self.label

    def dft_value(self, k: int) -> float:
        return float(self.dft_values[_slot(self, k)])

    def hat(self, j):
        """Continuum coefficient ``J^_j`` for arbitrary integers ``j``.

        Uses the closed-form transform when the kernel came from an infinite
        kernel; otherwise the stored table, which is exact (zero) beyond it.
        """
        j = np.asarray(j)
        if self.source is not None:
            return continuous_transform(self.source, 2 * np.pi * j)
        table = self.fourier_coeffs
        out = np.zeros(j.shape)
        inside = np.abs(j) <= table.max_mode
        out[inside] = table.values[j[inside] + table.max_mode]
        return out

    @cached_property
    def gaps(self) -> np.ndarray:
        """``J~_0 - J~_k`` in FFT storage order."""
        return self.dft_values[0] - self.dft_values

    @cached_property
    def circulant(self) -> np.ndarray:
        """``A[j, r] = J(x_j - x_r) = samples[(j - r) mod N]``."""
        n = self.n_points
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        a = self.samples[idx]
        a.setflags(write=False)
        return a

    @cached_property
    def assumptions(self) -> "AssumptionReport":
        return check_assumptions(self)


def _slot(pk: PeriodicKernel, k: int) -> int:
    n = pk.n_points
    if not -n // 2 + 1 <= k <= n // 2:
        raise IndexOutOfRange(f"mode {k} outside [{-n // 2 + 1}, {n // 2}]")
    return k % n


def _grid_transform(samples: np.ndarray) -> np.ndarray:
    n = samples.size
    raw = np.fft.fft(samples) / n
    scale = max(1.0, float(np.max(np.abs(samples))))
    imag = float(np.max(np.abs(raw.imag)))
    if imag > 1e-12 * scale:
        raise ValueError(f"kernel grid transform is not real (imag {imag:.3g}); kernel not symmetric")
    out = raw.real.copy()
    out.setflags(write=False)
    return out


def choose_radius(kernel: InfiniteKernel, tail_tol: float) -> int:
    for R in range(1, MAX_RADIUS + 1):
        if kernel.tail_bound(R) < tail_tol:
            return R
    raise NonDecayingKernel(f"no lattice radius <= {MAX_RADIUS} meets tail tolerance {tail_tol:g}")


def periodize(kernel: InfiniteKernel, n_points: int, tail_tol: float = 1e-14,
              max_mode: Optional[int] = None, radius: Optional[int] = None) -> PeriodicKernel:
    """Sample the lattice sum ``sum_{|r|<=R} J_inf(x_j - r)`` on an N-point grid."""
    n = check_even(n_points, minimum=4)
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    R = choose_radius(kernel, tail_tol) if radius is None else int(radius)
    # minimum-image offsets in (-1/2, 1/2] keep the truncated lattice sum even
    j = np.arange(n)
    x = np.where(j <= n // 2, j, j - n) / n
    shifts = np.arange(-R, R + 1)
    samples = kernel(x[:, None] - shifts[None, :]).sum(axis=1)
    samples.setflags(write=False)
    M = 4 * n if max_mode is None else int(max_mode)
    coeffs = FourierCoefficients.from_function(
        lambda j: continuous_transform(kernel, 2 * np.pi * j), M)
    return PeriodicKernel(
        n_points=n,
        samples=samples,
        fourier_coeffs=coeffs,
        dft_values=_grid_transform(samples),
        truncation_radius=R,
        hat_J0=float(continuous_transform(kernel, 0.0)),
        source=kernel,
    )


def from_fourier(coeffs: dict, n_points: int, label: str = "trigonometric") -> PeriodicKernel:
    """Periodic kernel given directly by finitely many real, even coefficients."""
    n = check_even(n_points, minimum=4)
    M = max(abs(int(j)) for j in coeffs)
    table = np.zeros(2 * M + 1)
    for j, v in coeffs.items():
        table[int(j) + M] = v
    ks = np.arange(-M, M + 1)
    x = grid_points(n)
    samples = np.real(np.exp(2j * np.pi * np.outer(x, ks)) @ table.astype(complex))
    samples.setflags(write=False)
    return PeriodicKernel(n, samples, FourierCoefficients(M, table), _grid_transform(samples),
                          0, float(table[M]), None, label)


def cosine_kernel(n_points: int, amplitude: float = 1.0, mode: int = 2) -> PeriodicKernel:
    """``J(x) = 1 + amplitude cos(2 pi mode x)``, a deliberate A4 counterexample."""
    return from_fourier({0: 1.0, mode: amplitude / 2, -mode: amplitude / 2}, n_points,
                        label=f"cosine(a={amplitude:g},m={mode})")


def fourier_coefficient(pk: PeriodicKernel, index: int) -> float:
    return float(pk.fourier_coeffs[index])


def dft_gap(pk: PeriodicKernel, k: int) -> float:
    gap = float(pk.gaps[_slot(pk, k)])
    if __debug__ and pk.assumptions.overall:
        assert -1e-12 <= gap <= 2 + 1e-12, f"gap {gap} violates 0 <= J~0 - J~k <= 2"
    return gap


@dataclass(frozen=True)
class AssumptionReport:
    a1_nonneg: bool
    a2_symmetric: bool
    a3_unit_mass: bool
    a3_residual: float
    a3_grid_residual: float
    a4_monotone_decreasing_on_half: bool
    a4_worst_violation: float
    a5_nonneg_fourier: bool
    a5_min_coefficient: float
    overall: bool

    def to_dict(self) -> dict:
        return {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
                for k, v in asdict(self).items()}

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def check_assumptions(pk: PeriodicKernel, tol: float = DEFAULT_TOL) -> AssumptionReport:
    s = pk.samples
    n = pk.n_points
    scale = max(1.0, float(np.max(np.abs(s))))
    a1 = float(np.min(s)) >= -tol * scale
    a2 = float(np.max(np.abs(s - s[(-np.arange(n)) % n]))) <= tol * scale
    # unit mass is a statement about the continuum integral J^_0; the midpoint sum
    # J~_0 differs from it by aliasing and is only reported
    a3_res = abs(pk.hat_J0 - 1.0)
    a3_grid = abs(float(pk.dft_values[0]) - 1.0)
    half = s[: n // 2 + 1]
    worst = float(np.max(np.diff(half)))
    a4 = worst <= tol * scale
    ks = np.arange(-n // 2 + 1, n // 2 + 1)
    min_hat = float(np.min(pk.hat(ks)))
    a5 = min_hat >= -tol
    a3 = a3_res <= tol
    return AssumptionReport(a1, a2, a3, a3_res, a3_grid, a4, worst, a5, min_hat,
                            bool(a1 and a2 and a3 and a4 and a5))

