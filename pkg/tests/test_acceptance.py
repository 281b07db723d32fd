"""Exit criteria of the build, one test per criterion.

Each test tags itself with ``criterion``; the terminal summary prints one
PASS/FAIL line per criterion. Tolerances are the stated ones.
"""
import time

import numpy as np
import pytest

from nonlocal_euler import (ExactSolution, GaussianBump, GridFunction, InfiniteKernel, LaplaceBump, SchemeConfig,
                            SingleMode, CosineMode, check_assumptions, convergence_sweep, critical_timestep, dft,
                            discrete_norm, exact_at, fit_rate, idft, parseval_residual, periodize, run,
                            semidiscrete_exact, spectral_evolve)
from nonlocal_euler.analysis import is_monotone, worst_mode_data
from nonlocal_euler.cli import main

from oracles import direct_dft

pytestmark = pytest.mark.acceptance

GAP_KERNELS = [InfiniteKernel.gaussian(10.0), InfiniteKernel.gaussian(100.0),
               InfiniteKernel.laplace(5.0), InfiniteKernel.laplace(10.0)]
GAUSS10 = InfiniteKernel.gaussian(10.0)


def _tag(record_property, label):
    record_property("criterion", label)


def test_01_gap_bounds_and_assumptions(record_property):
    _tag(record_property, "1 gap bounds and kernel assumptions")
    t0 = time.perf_counter()
    for kernel in GAP_KERNELS:
        for n in (8, 16, 32, 64, 128, 256):
            pk = periodize(kernel, n)
            gaps = pk.gaps
            assert np.all(gaps >= 0) and np.all(gaps <= 2), (kernel.tag, n, gaps.min(), gaps.max())
            rep = check_assumptions(pk)
            assert rep.overall, (kernel.tag, n, rep)
    assert time.perf_counter() - t0 < 5.0


def test_02_stability_threshold(record_property):
    _tag(record_property, "2 stability threshold")
    t0 = time.perf_counter()
    pk = periodize(GAUSS10, 64)
    rep = critical_timestep(pk)
    stable = run(GaussianBump().sample(64), pk, SchemeConfig(64, 0.9 * rep.dt_star_sharp, 10_000),
                 snapshot_every=10_000)
    assert is_monotone(stable.norm_history, rtol=1e-12)
    unstable = run(worst_mode_data(pk), pk, SchemeConfig(64, 1.1 * rep.dt_star_sharp, 500),
                   snapshot_every=500, allow_blowup=True)
    norms = np.asarray(unstable.norm_history)
    assert np.any(norms[1:] > norms[0])
    assert time.perf_counter() - t0 < 10.0


@pytest.mark.parametrize("kernel", [GAUSS10, InfiniteKernel.gaussian(100.0), InfiniteKernel.laplace(5.0),
                                    InfiniteKernel.laplace(10.0)], ids=lambda k: k.tag)
def test_03_mass_conservation(record_property, kernel):
    _tag(record_property, "3 mass conservation")
    pk = periodize(kernel, 64)
    dt = 0.9 * critical_timestep(pk).dt_star_sharp
    u0 = LaplaceBump(0.3).sample(64)
    res = run(u0, pk, SchemeConfig(64, dt, 10_000), snapshot_every=100)
    m0 = dft(u0)[0]
    drift = max(abs(dft(g)[0] - m0) for _, g in res.snapshots)
    assert drift <= 1e-12 * abs(m0)


def test_04_dual_path(record_property):
    _tag(record_property, "4 physical vs spectral paths")
    n = 128
    pk = periodize(GAUSS10, n)
    dt = 0.9 * critical_timestep(pk).dt_star_sharp
    u0 = LaplaceBump().sample(n)
    res = run(u0, pk, SchemeConfig(n, dt, 10_000), snapshot_every=1)
    s0 = dft(u0)
    worst = 0.0
    for step, g in res.snapshots[1:]:
        spectral = idft(spectral_evolve(s0, pk, dt, step)).values.real
        diff = discrete_norm(GridFunction(g.values - spectral))
        worst = max(worst, diff / (1e-10 * step))
    assert worst <= 1.0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_05_single_mode_closed_form(record_property, k):
    _tag(record_property, "5 single-mode exact error")
    n, dt, steps = 64, 0.05, 400
    pk = periodize(GAUSS10, n)
    data = SingleMode(k, 1.0)
    res = run(data.sample(n), pk, SchemeConfig(n, dt, steps), snapshot_every=1)
    sol = ExactSolution(data, pk)
    q = float(pk.hat(k) - pk.hat(0))
    g = 1.0 - dt * float(pk.gaps[k])
    for m, snap in res.snapshots:
        measured = discrete_norm(exact_at(sol, m * dt, n) - snap)
        expected = abs(np.exp(q * m * dt) - g ** m) * abs(data.amplitude)
        assert abs(measured - expected) <= 1e-12


def test_06_temporal_order(record_property):
    _tag(record_property, "6 temporal order")
    t0 = time.perf_counter()
    recs = convergence_sweep(GAUSS10, GaussianBump(), 1.0, [512], [1 / 64, 1 / 128, 1 / 256, 1 / 512, 1 / 1024])
    fit = fit_rate(recs, "dt")
    print(f"dt-rate {fit.slope:.4f} r2 {fit.r_squared:.6f} (full range {fit.full_slope:.4f})")
    assert abs(fit.slope - 1.0) <= 0.15 and fit.r_squared >= 0.99
    assert time.perf_counter() - t0 < 60.0


def test_07_smoothness_separation(record_property):
    _tag(record_property, "7 smoothness separation")
    t0 = time.perf_counter()
    grids = [32, 64, 128, 256, 512]
    gauss = fit_rate(convergence_sweep(GAUSS10, GaussianBump(), 1.0, grids, [1 / 4096]), "h")
    lap = fit_rate(convergence_sweep(GAUSS10, LaplaceBump(), 1.0, grids, [1 / 4096]), "h")
    print(f"h-rate gaussian_bump {gauss.effective_rate} (slope {gauss.slope:.4f}, floor {gauss.floor_limited}); "
          f"laplace_bump {lap.slope:.4f} (full range {lap.full_slope:.4f})")
    assert time.perf_counter() - t0 < 300.0
    assert gauss.effective_rate > lap.effective_rate
    assert abs(lap.slope - 1.5) <= 0.25


@pytest.mark.parametrize("data", [SingleMode(1), SingleMode(3), CosineMode(2)], ids=lambda d: d.tag)
def test_08_semidiscrete_convergence(record_property, data):
    _tag(record_property, "8 semidiscrete convergence")
    gaps = []
    for n in (16, 32, 64, 128, 256):
        pk = periodize(InfiniteKernel.laplace(10.0), n)
        exact = exact_at(ExactSolution(data, pk), 1.0, n)
        semi = idft(semidiscrete_exact(dft(data.sample(n)), pk, 1.0))
        gaps.append(discrete_norm(exact - semi))
    print(data.tag, gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_09_spectral_infrastructure(record_property, rng):
    _tag(record_property, "9 spectral infrastructure")
    for n in (8, 16, 32, 64, 128, 256, 512, 1024):
        for _ in range(100):
            g = GridFunction(rng.standard_normal(n))
            assert parseval_residual(g) <= 1e-12
            assert np.max(np.abs(idft(dft(g)).values - g.values)) <= 1e-13
            if n <= 256:
                assert np.max(np.abs(dft(g).modes - direct_dft(g.values))) <= 1e-12


def test_10_determinism(record_property, tmp_path):
    _tag(record_property, "10 deterministic converge output")
    args = ["--set", "sweep.families=gaussian_bump,laplace_bump", "--set", "sweep.grids=16,32,64",
            "--set", "sweep.dts=1/16,1/32,1/64"]
    outs = []
    for i, extra in enumerate([[], [], ["--jobs", "4"]]):
        out = tmp_path / f"run{i}"
        assert main(["converge", "--out", str(out), *args, *extra]) == 0
        outs.append((out / "errors.csv").read_bytes())
    assert outs[0] == outs[1] == outs[2]
