"""Initial-data families and Fourier-series reference solutions.

The continuum solution is ``u(x, t) = sum_j u^_j(0) exp(q^_j t) exp(2i pi j x)``
with ``q^_j = J^_j - J^_0 <= 0``; the semidiscrete one multiplies each grid
mode by ``exp(q~_k t)`` with ``q~_k = J~_k - J~_0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GridMismatch, NegativeTime, TailNotResolved
from .kernels import PeriodicKernel
from .spectral import (FourierCoefficients, GridFunction, SpectralField, check_even,
                       grid_points, synthesize)


class InitialData:
    """Base class for ``u_0``.

    Subclasses provide ``coefficients(ks)`` (continuum coefficients ``u^_k(0)``)
    and ``evaluate(x)`` (pointwise values of the 1-periodic function).
    """

    tag: str = "initial"
    real_valued: bool = True
    sobolev_exponent_hint: float = np.inf
    max_mode: Optional[int] = None

    def coefficients(self, ks) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, x) -> np.ndarray:
        raise NotImplementedError

    def tail_bound(self, max_mode: int) -> float:
        """Bound on ``sqrt(sum_{|k| > M} |u^_k|^2)``."""
        if self.max_mode is not None and max_mode >= self.max_mode:
            return 0.0
        return np.inf

    def sample(self, n_points: int) -> GridFunction:
        return GridFunction(self.evaluate(grid_points(check_even(n_points))))


@dataclass(frozen=True)
class GaussianBump(InitialData):
    """``u_0(x) = sum_r pi^-1/2 exp(-a (x - center - r)^2)``, periodized."""

    a: float = 1.0
    center: float = 0.5

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("GaussianBump requires a > 0")

    @property
    def tag(self):
        return "gaussian_bump"

    def coefficients(self, ks):
        ks = np.asarray(ks, dtype=float)
        return (np.exp(-np.pi ** 2 * ks * ks / self.a) / np.sqrt(self.a)
                * np.exp(-2j * np.pi * ks * self.center))

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        R = int(np.ceil(np.sqrt(40.0 / self.a))) + 2
        r = np.arange(-R, R + 1)
        d = x[..., None] - self.center - r
        return np.exp(-self.a * d * d).sum(axis=-1) / np.sqrt(np.pi)

    def tail_bound(self, max_mode):
        k = max_mode + 1.0
        lead = np.exp(-2 * np.pi ** 2 * k * k / self.a) / self.a
        ratio = np.exp(-2 * np.pi ** 2 * (2 * k + 1) / self.a)
        return float(np.sqrt(2 * lead / (1 - ratio)))


@dataclass(frozen=True)
class LaplaceBump(InitialData):
    """``u_0(x) = exp(-|x - center|) / 2`` on [0, 1), extended periodically.

    With ``center = 1/2`` the extension is continuous with kinks at ``x = 1/2``
    and ``x = 0``, so ``|u^_k| ~ k^-2``.
    """

    center: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.center <= 1.0:
            raise ValueError("LaplaceBump center must lie in [0, 1]")

    @property
    def tag(self):
        return "laplace_bump"

    @property
    def sobolev_exponent_hint(self):
        return 1.5 if self.center == 0.5 else 0.5

    def coefficients(self, ks):
        w = 2 * np.pi * np.asarray(ks, dtype=float)
        c = self.center
        p = np.exp(-1j * w * c)
        left = (p - np.exp(-c)) / (1 - 1j * w)
        right = (p - np.exp(c - 1)) / (1 + 1j * w)
        return 0.5 * (left + right)

    def evaluate(self, x):
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        return 0.5 * np.exp(-np.abs(x - self.center))

    def tail_bound(self, max_mode):
        c = self.center
        A = 1 + 0.5 * (np.exp(-c) + np.exp(c - 1))
        B = 0.5 * abs(np.exp(-c) - np.exp(c - 1))
        M = float(max_mode)
        sq = 4 * (A * A / (48 * np.pi ** 4 * M ** 3) + B * B / (4 * np.pi ** 2 * M))
        return float(np.sqrt(sq))


@dataclass(frozen=True)
class SingleMode(InitialData):
    """``u_0(x) = amplitude * exp(2i pi k x)``."""

    k: int = 1
    amplitude: complex = 1.0

    @property
    def tag(self):
        return f"single_mode(k={self.k})"

    @property
    def real_valued(self):
        return self.k == 0 and complex(self.amplitude).imag == 0

    @property
    def max_mode(self):
        return abs(self.k)

    def coefficients(self, ks):
        ks = np.asarray(ks)
        return np.where(ks == self.k, complex(self.amplitude), 0j)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        v = complex(self.amplitude) * np.exp(2j * np.pi * self.k * x)
        return v.real if self.real_valued else v


@dataclass(frozen=True)
class CosineMode(InitialData):
    """``u_0(x) = amplitude * cos(2 pi k x)``; ``k = N/2`` gives ``(-1)^j``."""

    k: int = 1
    amplitude: float = 1.0

    @property
    def tag(self):
        return f"cosine_mode(k={self.k})"

    @property
    def max_mode(self):
        return abs(self.k)

    def coefficients(self, ks):
        ks = np.asarray(ks)
        if self.k == 0:
            return np.where(ks == 0, self.amplitude + 0j, 0j)
        return np.where(np.abs(ks) == abs(self.k), self.amplitude / 2 + 0j, 0j)

    def evaluate(self, x):
        return self.amplitude * np.cos(2 * np.pi * self.k * np.asarray(x, dtype=float))


class GridSamples(InitialData):
    """Data known only through samples on an ``N0``-grid.

    The underlying function is taken to be the trigonometric interpolant,
    whose coefficients are the scaled DFT of the samples with the Nyquist
    mode split evenly between ``+-N0/2`` (this keeps real data real).
    """

    tag = "grid_samples"

    def __init__(self, values):
        g = GridFunction(values)
        self.values = g.values
        self.real_valued = g.is_real
        n = g.n_points
        self.max_mode = n // 2
        spec = np.fft.fft(g.values) / n
        table = np.zeros(n + 1, dtype=complex)
        ks = np.arange(-n // 2, n // 2 + 1)
        table[:] = spec[ks % n]
        table[0] *= 0.5
        table[-1] *= 0.5
        self._table = table

    def coefficients(self, ks):
        ks = np.asarray(ks)
        out = np.zeros(ks.shape, dtype=complex)
        inside = np.abs(ks) <= self.max_mode
        out[inside] = self._table[ks[inside] + self.max_mode]
        return out

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        ks = np.arange(-self.max_mode, self.max_mode + 1)
        v = np.exp(2j * np.pi * np.multiply.outer(x, ks)) @ self._table
        return v.real if self.real_valued else v

    def sample(self, n_points):
        n = check_even(n_points)
        if n == self.values.size:
            return GridFunction(self.values)
        ks = np.arange(-self.max_mode, self.max_mode + 1)
        v = synthesize(self._table, ks, n)
        return GridFunction(v.real if self.real_valued else v)


def initial_coefficients(data: InitialData, max_mode: int, tol: float = np.inf) -> FourierCoefficients:
    if max_mode < 1:
        raise ValueError("max_mode must be >= 1")
    bound = data.tail_bound(max_mode)
    if bound > tol:
        raise TailNotResolved(f"{data.tag}: coefficient tail {bound:.3g} beyond |k|={max_mode} exceeds {tol:g}")
    return FourierCoefficients.from_function(data.coefficients, max_mode)


@dataclass(frozen=True, eq=False)
class ExactSolution:
    initial: InitialData
    kernel: PeriodicKernel
    max_mode: Optional[int] = None

    def truncation(self, n_points: int) -> int:
        if self.initial.max_mode is not None:
            return self.initial.max_mode
        if self.max_mode is not None:
            return self.max_mode
        return max(256, 8 * n_points)

    def decay_exponents(self, js) -> np.ndarray:
        """``q^_j = J^_j - J^_0``."""
        js = np.asarray(js)
        return self.kernel.hat(js) - self.kernel.hat(np.zeros_like(js))

    def coefficients_at(self, t: float, max_mode: int) -> FourierCoefficients:
        ks = np.arange(-max_mode, max_mode + 1)
        return FourierCoefficients(max_mode, self.initial.coefficients(ks) * np.exp(self.decay_exponents(ks) * t))

    def truncation_tail(self, t: float, max_mode: int, split: bool = True) -> float:
        """Sum of the magnitudes of the omitted terms ``M < |j| <= 8M``."""
        ks = np.concatenate([np.arange(-8 * max_mode, -max_mode), np.arange(max_mode + 1, 8 * max_mode + 1)])
        c = np.abs(self.initial.coefficients(ks))
        if split:
            j0 = self.kernel.hat(0)
            w = np.exp(-j0 * t) * np.abs(np.expm1(self.kernel.hat(ks) * t))
        else:
            w = np.exp(self.decay_exponents(ks) * t)
        return float(np.sum(c * w))


def exact_at(sol: ExactSolution, t: float, n_points: int, max_mode: Optional[int] = None,
             method: str = "split") -> GridFunction:
    """Grid samples of the Fourier-series solution at time ``t``.

    ``method="series"`` evaluates the plain truncated series. The default
    ``"split"`` writes the solution as ``exp(-J^_0 t) u_0(x)`` plus a series
    whose terms carry the factor ``expm1(J^_j t)``, which converges as fast
    as the product of the data and kernel coefficient decays. For data with
    finitely many modes both are the same finite sum.
    """
    if t < 0:
        raise NegativeTime(f"t = {t} < 0")
    n = check_even(n_points)
    data = sol.initial
    M = sol.truncation(n) if max_mode is None else int(max_mode)
    ks = np.arange(-M, M + 1)
    c0 = data.coefficients(ks)
    if data.max_mode is not None or method == "series":
        values = synthesize(c0 * np.exp(sol.decay_exponents(ks) * t), ks, n)
    elif method == "split":
        j0 = float(sol.kernel.hat(0))
        corr = c0 * (np.exp(-j0 * t) * np.expm1(sol.kernel.hat(ks) * t))
        values = np.exp(-j0 * t) * data.evaluate(grid_points(n)) + synthesize(corr, ks, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    if data.real_valued:
        values = np.real(values)
    return GridFunction(values)


def semidiscrete_exact(initial_spectrum: SpectralField, kernel: PeriodicKernel, t: float) -> SpectralField:
    """Scale grid mode ``k`` by ``exp((J~_k - J~_0) t)``."""
    if t < 0:
        raise NegativeTime(f"t = {t} < 0")
    if initial_spectrum.n_points != kernel.n_points:
        raise GridMismatch(f"spectrum has {initial_spectrum.n_points} modes, kernel {kernel.n_points}")
    return initial_spectrum.scaled(np.exp(-kernel.gaps * t))


@dataclass(frozen=True)
class SobolevNorm:
    value: float
    stabilized: bool
    last_octave_fraction: float
    max_mode: int


def sobolev_norm(data: InitialData, sigma: float, max_mode: Optional[int] = None,
                 octave_tol: float = 0.01) -> SobolevNorm:
    """``sqrt(|u^_0|^2 + sum_{0<|m|<=M} |m|^(2 sigma) |u^_m|^2)``.

    ``stabilized`` is False when the modes ``M/2 < |m| <= M`` carry more than
    ``octave_tol`` of the squared sum, which signals ``u_0`` outside ``H^sigma``.
    """
    M = max_mode or data.max_mode or 4096
    ks = np.arange(-M, M + 1)
    c2 = np.abs(data.coefficients(ks)) ** 2
    w = np.where(ks == 0, 1.0, np.abs(ks).astype(float) ** (2 * sigma))
    terms = w * c2
    total = float(terms.sum())
    last = float(terms[np.abs(ks) > M // 2].sum())
    frac = last / total if total > 0 else 0.0
    exact_sum = data.max_mode is not None and M >= data.max_mode
    return SobolevNorm(float(np.sqrt(total)), exact_sum or frac <= octave_tol, frac, M)
