"""Independent reference computations used by the tests.

Nothing here calls into the package's numerical code paths: transforms are
direct sums, integrals go through scipy quadrature, and ODE references
through scipy's Runge-Kutta integrator.
"""
import numpy as np
from scipy import integrate


def direct_dft(u):
    """``U~_k = h sum_j U_j exp(-2 pi i j k / N)`` by an explicit O(N^2) sum."""
    u = np.asarray(u, dtype=complex)
    n = u.size
    j = np.arange(n)
    return np.array([np.sum(u * np.exp(-2j * np.pi * j * k / n)) for k in range(n)]) / n


def quad_transform(func, xi, cutoff=np.inf):
    """``int_R f(y) cos(xi y) dy`` for an even integrand."""
    if xi == 0:
        val, _ = integrate.quad(func, 0, cutoff, limit=400, epsabs=1e-14, epsrel=1e-13)
    else:
        val, _ = integrate.quad(func, 0, np.inf, weight="cos", wvar=abs(xi), limlst=400)
    return 2 * val


def quad_fourier_coefficient(func, k, center=0.5):
    """``int_0^1 f(x) exp(-2 pi i k x) dx`` with a breakpoint at ``center``."""
    re, _ = integrate.quad(lambda x: func(x) * np.cos(2 * np.pi * k * x), 0, 1, points=[center], limit=400,
                           epsabs=1e-14)
    im, _ = integrate.quad(lambda x: -func(x) * np.sin(2 * np.pi * k * x), 0, 1, points=[center], limit=400,
                           epsabs=1e-14)
    return re + 1j * im


def direct_lattice_sum(func, x, radius=50):
    return sum(func(x - r) for r in range(-radius, radius + 1))


def rk_semidiscrete(samples, u0, t):
    """Integrate ``dU_j/dt = h sum_k J(x_j - x_k)(U_k - U_j)`` with DOP853."""
    s = np.asarray(samples, dtype=float)
    n = s.size
    h = 1.0 / n
    A = np.array([[s[(j - k) % n] for k in range(n)] for j in range(n)])
    row = A.sum(axis=1)

    def f(_, u):
        return h * (A @ u) - h * row * u

    y0 = np.asarray(u0, dtype=complex)
    sol = integrate.solve_ivp(lambda t_, u: f(t_, u), (0, t), y0.real, method="DOP853", rtol=1e-12, atol=1e-14)
    out = sol.y[:, -1].astype(complex)
    if np.any(y0.imag):
        sol_i = integrate.solve_ivp(f, (0, t), y0.imag, method="DOP853", rtol=1e-12, atol=1e-14)
        out += 1j * sol_i.y[:, -1]
    return out


def naive_euler(samples, u0, dt, n_steps):
    """Loop-form Euler iteration, a second code path for the scheme."""
    s = np.asarray(samples, dtype=float)
    n = s.size
    h = 1.0 / n
    u = np.array(u0, dtype=complex)
    for _ in range(n_steps):
        new = np.empty_like(u)
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += s[(j - k) % n] * (u[k] - u[j])
            new[j] = u[j] + dt * h * acc
        u = new
    return u


def brute_aliasing_energy(coeff_func, n, shells=2000):
    """``sum_k |sum_{s != 0} u^_{k+sN}|^2`` with a fixed, generous shell count."""
    total = 0.0
    for k in range(-n // 2 + 1, n // 2 + 1):
        s = np.concatenate([np.arange(-shells, 0), np.arange(1, shells + 1)])
        total += abs(np.sum(coeff_func(k + s * n))) ** 2
    return total


def laplace_poisson_sum(c, k, n):
    """``sum_m c^2 / (c^2 + (2 pi (k + m N))^2)`` in closed form.

    Uses ``sum_m 1/(a^2 + (m + b)^2) = (pi/a) sinh(2 pi a) / (cosh(2 pi a) - cos(2 pi b))``.
    """
    a = c / (2 * np.pi * n)
    b = k / n
    pref = c * c / (4 * np.pi ** 2 * n * n)
    return pref * (np.pi / a) * np.sinh(2 * np.pi * a) / (np.cosh(2 * np.pi * a) - np.cos(2 * np.pi * b))
