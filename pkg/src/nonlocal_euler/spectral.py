"""Grid functions, the scaled DFT, discrete norms and the Parseval/Poisson checks.

Conventions used everywhere in the package:

* grid ``x_j = j h`` with ``h = 1/N`` and ``N`` even;
* forward transform ``U~_k = h * sum_j u_j exp(-2i pi k x_j)`` so that ``U~_k``
  approximates the Fourier coefficient ``u^_k``;
* inverse transform ``u_j = sum_k U~_k exp(2i pi k x_j)`` with no factor;
* modes are addressed by ``k`` in ``{-N/2+1, ..., N/2}``.

With this pair Parseval reads ``||u||_h^2 = sum_k |U~_k|^2``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import GridMismatch, IndexOutOfRange, InsufficientCoefficientRange, OddGridSize


def check_even(n: int, minimum: int = 2) -> int:
    if int(n) != n or n < minimum:
        raise OddGridSize(f"grid size must be an even integer >= {minimum}, got {n}")
    if n % 2:
        raise OddGridSize(f"grid size must be even, got {n}")
    return int(n)


def mode_indices(n: int) -> np.ndarray:
    """Mode numbers ``k`` in numpy FFT storage order, mapped into ``(-N/2, N/2]``."""
    k = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    k[n // 2] = n // 2
    return k


def grid_points(n: int) -> np.ndarray:
    return np.arange(n) / n


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples ``values[j] = u(x_j)`` on the uniform periodic grid."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1:
            raise ValueError("GridFunction values must be one-dimensional")
        check_even(v.size)
        if not np.iscomplexobj(v):
            v = v.astype(float)
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def from_function(cls, func, n: int) -> "GridFunction":
        return cls(func(grid_points(check_even(n))))

    @property
    def n_points(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return 1.0 / self.n_points

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.n_points)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        if other.n_points != self.n_points:
            raise GridMismatch(f"{self.n_points} != {other.n_points}")
        return GridFunction(self.values - other.values)

    def to_csv(self, path) -> None:
        values = self.values.astype(complex)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "x_j", "re", "im"])
            for j, (xj, v) in enumerate(zip(self.x, values)):
                w.writerow([j, repr(float(xj)), repr(float(v.real)), repr(float(v.imag))])

    @classmethod
    def from_csv(cls, path) -> "GridFunction":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        rows.sort(key=lambda r: int(r["j"]))
        re = np.array([float(r["re"]) for r in rows])
        im = np.array([float(r["im"]) for r in rows])
        return cls(re if not np.any(im) else re + 1j * im)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """DFT image of a grid function.

    ``modes`` is held in numpy FFT order; use ``field[k]`` or :meth:`centered`
    for index-based access.
    """

    modes: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.modes, dtype=complex)
        if m.ndim != 1:
            raise ValueError("SpectralField modes must be one-dimensional")
        check_even(m.size)
        object.__setattr__(self, "modes", _freeze(m))

    @property
    def n_points(self) -> int:
        return self.modes.size

    @property
    def ks(self) -> np.ndarray:
        return mode_indices(self.n_points)

    def _slot(self, k: int) -> int:
        n = self.n_points
        if not -n // 2 + 1 <= k <= n // 2:
            raise IndexOutOfRange(f"mode {k} outside [{-n // 2 + 1}, {n // 2}]")
        return k % n

    def __getitem__(self, k: int) -> complex:
        return complex(self.modes[self._slot(k)])

    def centered(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(k, modes)`` ordered from ``-N/2+1`` to ``N/2``."""
        n = self.n_points
        k = np.arange(-n // 2 + 1, n // 2 + 1)
        return k, self.modes[k % n]

    @classmethod
    def from_modes(cls, n: int, mapping: Mapping[int, complex]) -> "SpectralField":
        out = np.zeros(check_even(n), dtype=complex)
        tmp = cls(out)
        for k, v in mapping.items():
            out[tmp._slot(int(k))] = v
        return cls(out)

    def scaled(self, factors: np.ndarray) -> "SpectralField":
        """Multiply mode ``k`` by ``factors`` given in FFT storage order."""
        return SpectralField(self.modes * factors)

    def to_csv(self, path) -> None:
        k, m = self.centered()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "re", "im"])
            for kk, v in zip(k, m):
                w.writerow([int(kk), repr(float(v.real)), repr(float(v.imag))])


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Continuum Fourier coefficients ``c_k`` for ``|k| <= max_mode``."""

    max_mode: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (2 * self.max_mode + 1,):
            raise ValueError("values must have length 2*max_mode+1")
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def from_function(cls, func, max_mode: int) -> "FourierCoefficients":
        return cls(max_mode, func(np.arange(-max_mode, max_mode + 1)))

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.max_mode, self.max_mode + 1)

    def __getitem__(self, k: int):
        if abs(k) > self.max_mode:
            raise IndexOutOfRange(f"coefficient {k} outside |k| <= {self.max_mode}")
        return self.values[k + self.max_mode]

    def __contains__(self, k) -> bool:
        return abs(k) <= self.max_mode

    def items(self):
        return zip(self.ks.tolist(), self.values.tolist())


def dft(g: GridFunction) -> SpectralField:
    return SpectralField(np.fft.fft(g.values) * g.h)


def idft(s: SpectralField) -> GridFunction:
    return GridFunction(np.fft.ifft(s.modes) * s.n_points)


def discrete_norm(g: GridFunction) -> float:
    return float(np.sqrt(g.h * np.sum(np.abs(g.values) ** 2)))


def parseval_residual(g: GridFunction) -> float:
    return abs(discrete_norm(g) ** 2 - float(np.sum(np.abs(dft(g).modes) ** 2)))


def fold(coeffs: np.ndarray, ks: np.ndarray, n: int) -> np.ndarray:
    """Alias continuum coefficients onto ``n`` grid modes: ``sum_m c_{k+mN}``.

    Result is in FFT storage order.
    """
    out = np.zeros(n, dtype=np.result_type(coeffs, float))
    np.add.at(out, np.asarray(ks) % n, coeffs)
    return out


def synthesize(coeffs: np.ndarray, ks: np.ndarray, n: int) -> np.ndarray:
    """Evaluate ``sum_k c_k exp(2i pi k x_j)`` on the ``n``-point grid."""
    return np.fft.ifft(fold(np.asarray(coeffs, dtype=complex), ks, n)) * n


def poisson_sum_residual(continuous_coeffs: FourierCoefficients, g: GridFunction) -> float:
    """``max_k |U~_k - sum_m u^_{k+mN}|`` over the grid modes of ``g``."""
    n = g.n_points
    if continuous_coeffs.max_mode < 2 * n:
        raise InsufficientCoefficientRange(
            f"need |k| <= {2 * n} coefficients, have {continuous_coeffs.max_mode}"
        )
    aliased = fold(continuous_coeffs.values.astype(complex), continuous_coeffs.ks, n)
    return float(np.max(np.abs(dft(g).modes - aliased)))
