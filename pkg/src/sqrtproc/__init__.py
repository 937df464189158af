"""Square-root Wiener process: formal Itô algebra, Monte Carlo sampling,
regularized sums, a complex diffusion solver and the binomial wave map."""

from .ito_algebra import ItoExpr, Monomial, QI, V, mul, reduce_ansatz_square, solve_sqrt_coefficients
from .paths import WienerPath, decompose, generate_wiener, power_variation
from .sqrt_process import phase_moments, phase_path, sample_free, sample_potential
from .pde import EvolutionCoefficients, GridSpec, analytic_free, evolve, gaussian_packet, moments, schrodinger_beta
from .binomial_map import binom_pmf, discrete_wave, gaussian_local_limit_error, inner

__version__ = "0.1.0"
