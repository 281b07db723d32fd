"""Forward Euler solver and analysis tools for the linear nonlocal diffusion
equation ``u_t = int J(x - y) (u(y) - u(x)) dy`` on the unit periodic cell."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .kernels import (AssumptionReport, InfiniteKernel, PeriodicKernel, check_assumptions,
                      continuous_transform, cosine_kernel, dft_gap, fourier_coefficient,
                      from_fourier, periodize)
from .spectral import (FourierCoefficients, GridFunction, SpectralField, dft, discrete_norm,
                       idft, parseval_residual, poisson_sum_residual)
from .exact import (CosineMode, ExactSolution, GaussianBump, GridSamples, InitialData,
                    LaplaceBump, SingleMode, exact_at, initial_coefficients,
                    semidiscrete_exact, sobolev_norm)
from .scheme import (EvolutionResult, SchemeConfig, amplification_factor, amplification_factors,
                     euler_step, run, semidiscrete_rhs, spectral_evolve)
from .analysis import (ConvergenceRecord, RateFit, StabilityReport, aliasing_exponent,
                       convergence_sweep, critical_timestep, error_at, error_decomposition,
                       fit_rate, norm_monotonicity_probe)
