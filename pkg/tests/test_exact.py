import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonlocal_euler import (CosineMode, ExactSolution, GaussianBump, GridSamples, InfiniteKernel, LaplaceBump,
                            SingleMode, dft, exact_at, idft, initial_coefficients, periodize, semidiscrete_exact,
                            sobolev_norm)
from nonlocal_euler.errors import GridMismatch, NegativeTime, TailNotResolved

from oracles import quad_fourier_coefficient, rk_semidiscrete


@pytest.mark.parametrize("data", [GaussianBump(), GaussianBump(5.0, 0.3), LaplaceBump(), LaplaceBump(0.3)],
                         ids=lambda d: repr(d))
@pytest.mark.parametrize("k", [0, 1, -2, 7])
def test_coefficients_match_quadrature(data, k):
    ref = quad_fourier_coefficient(data.evaluate, k, center=data.center)
    assert data.coefficients(np.array([k]))[0] == pytest.approx(ref, abs=1e-11)


def test_laplace_bump_half_closed_form():
    ks = np.arange(-5, 6)
    ref = ((-1.0) ** ks - np.exp(-0.5)) / (1 + 4 * np.pi ** 2 * ks ** 2)
    np.testing.assert_allclose(LaplaceBump().coefficients(ks), ref, atol=1e-15)


def test_laplace_bump_decays_like_k_minus_two():
    ks = np.array([100, 200, 400])
    mags = np.abs(LaplaceBump().coefficients(ks))
    slopes = np.diff(np.log(mags)) / np.diff(np.log(ks))
    assert np.allclose(slopes, -2, atol=0.01)


def test_gaussian_tail_bound_is_an_upper_bound():
    g = GaussianBump(1.0)
    for M in (1, 2, 3):
        ks = np.concatenate([np.arange(-400, -M), np.arange(M + 1, 401)])
        true_tail = np.sqrt(np.sum(np.abs(g.coefficients(ks)) ** 2))
        assert true_tail <= g.tail_bound(M)


def test_laplace_tail_bound_is_an_upper_bound():
    d = LaplaceBump(0.3)
    M = 50
    ks = np.concatenate([np.arange(-200000, -M), np.arange(M + 1, 200001)])
    assert np.sqrt(np.sum(np.abs(d.coefficients(ks)) ** 2)) <= d.tail_bound(M)


def test_initial_coefficients_tail_check():
    with pytest.raises(TailNotResolved):
        initial_coefficients(LaplaceBump(), 16, tol=1e-8)
    c = initial_coefficients(GaussianBump(), 16, tol=1e-12)
    assert c.max_mode == 16


def test_single_mode_exact_closed_form(gauss10_64):
    sol = ExactSolution(SingleMode(3, 2.0), gauss10_64)
    t = 0.7
    q = gauss10_64.hat(3) - gauss10_64.hat(0)
    x = np.arange(64) / 64
    np.testing.assert_allclose(exact_at(sol, t, 64).values, 2.0 * np.exp(q * t) * np.exp(6j * np.pi * x), atol=1e-14)


def test_cosine_mode_is_real(gauss10_64):
    u = exact_at(ExactSolution(CosineMode(2), gauss10_64), 0.5, 64)
    assert u.is_real


def test_exact_at_time_zero_is_initial_data(gauss10_64):
    for data in (GaussianBump(), LaplaceBump()):
        u = exact_at(ExactSolution(data, gauss10_64), 0.0, 64)
        np.testing.assert_allclose(u.values, data.sample(64).values, atol=1e-14)


def test_split_and_series_agree_for_smooth_data(gauss10_64):
    sol = ExactSolution(GaussianBump(), gauss10_64)
    a = exact_at(sol, 1.0, 64)
    b = exact_at(sol, 1.0, 64, method="series")
    assert np.max(np.abs(a.values - b.values)) < 1e-13


def test_split_converges_for_kinked_data(gauss10_64):
    sol = ExactSolution(LaplaceBump(), gauss10_64)
    a = exact_at(sol, 1.0, 64, max_mode=512)
    b = exact_at(sol, 1.0, 64, max_mode=8192)
    c = exact_at(sol, 1.0, 64, max_mode=8192, method="series")
    assert np.max(np.abs(a.values - b.values)) < 1e-15
    assert np.max(np.abs(c.values - b.values)) > 1e-6  # the plain series is polluted by its tail


def test_truncation_tail_is_small_for_split(gauss10_64):
    sol = ExactSolution(LaplaceBump(), gauss10_64)
    assert sol.truncation_tail(1.0, 256) < 1e-14
    assert sol.truncation_tail(1.0, 256, split=False) > 1e-5


def test_exact_solution_conserves_mean(gauss10_64):
    sol = ExactSolution(LaplaceBump(), gauss10_64)
    m0 = LaplaceBump().coefficients(np.array([0]))[0]
    for t in (0.5, 2.0):
        coeffs = sol.coefficients_at(t, 8)
        assert coeffs[0] == pytest.approx(m0, abs=1e-15)


def test_negative_time():
    pk = periodize(InfiniteKernel.gaussian(10.0), 8)
    with pytest.raises(NegativeTime):
        exact_at(ExactSolution(GaussianBump(), pk), -1.0, 8)
    with pytest.raises(NegativeTime):
        semidiscrete_exact(dft(GaussianBump().sample(8)), pk, -0.1)


def test_semidiscrete_grid_mismatch(gauss10_64):
    with pytest.raises(GridMismatch):
        semidiscrete_exact(dft(GaussianBump().sample(32)), gauss10_64, 1.0)


@pytest.mark.parametrize("kernel", [InfiniteKernel.gaussian(10.0), InfiniteKernel.laplace(5.0)], ids=str)
def test_semidiscrete_matches_runge_kutta(kernel):
    n = 16
    pk = periodize(kernel, n)
    u0 = LaplaceBump(0.3).sample(n)
    got = idft(semidiscrete_exact(dft(u0), pk, 1.3)).values
    ref = rk_semidiscrete(pk.samples, u0.values, 1.3)
    assert np.max(np.abs(got - ref)) < 1e-10


def test_grid_samples_interpolate_their_nodes(rng):
    v = rng.standard_normal(16)
    data = GridSamples(v)
    np.testing.assert_allclose(data.evaluate(np.arange(16) / 16), v, atol=1e-13)
    assert data.max_mode == 8


@given(st.floats(0.2, 40.0), st.floats(0.0, 1.0), st.floats(0.0, 3.0))
def test_exact_norm_never_grows(a, center, t):
    pk = periodize(InfiniteKernel.gaussian(10.0), 16)
    sol = ExactSolution(GaussianBump(a, center), pk)
    c0 = sol.coefficients_at(0.0, 64).values
    ct = sol.coefficients_at(t, 64).values
    assert np.sum(np.abs(ct) ** 2) <= np.sum(np.abs(c0) ** 2) * (1 + 1e-14)


def test_sobolev_membership():
    assert sobolev_norm(LaplaceBump(), 1.0).stabilized
    assert not sobolev_norm(LaplaceBump(), 2.0).stabilized
    assert sobolev_norm(GaussianBump(), 4.0).stabilized
    s = sobolev_norm(SingleMode(3, 2.0), 1.0)
    assert s.stabilized and s.value == pytest.approx(6.0)
