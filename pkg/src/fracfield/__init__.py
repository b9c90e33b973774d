"""fracfield: nonlocal time-fractional reaction-diffusion simulator.

Simulates d^a u/dt^a = Lap(u) + mu u^2 (1 - k J*u) - gamma u on a periodic
box (and a degenerate-diffusion variant with global coupling), and ships a
verification harness for the fractional-calculus machinery behind it:
Mittag-Leffler bounds, discrete Caputo inequalities, comparison solutions
and Lyapunov dissipation.
"""

from .mlf import ml_eval, ml_decay_envelope, gronwall_E
from .fractional import TimeGrid, History, l1_weights, caputo_l1, rl_integral
from .fode import LinearFODE, solve_exact, solve_l1, gronwall_majorant, comparison_cap
from .kernels import Domain, Kernel, build_kernel, convolve, global_mass
from .solver import ModelParams, Field, RunRecord, run, run_spectral
from .diagnostics import steady_states, k_star, local_l2, lyapunov_H, fit_decay

__version__ = "0.1.0"

__all__ = [
    "ml_eval",
    "ml_decay_envelope",
    "gronwall_E",
    "TimeGrid",
    "History",
    "l1_weights",
    "caputo_l1",
    "rl_integral",
    "LinearFODE",
    "solve_exact",
    "solve_l1",
    "gronwall_majorant",
    "comparison_cap",
    "Domain",
    "Kernel",
    "build_kernel",
    "convolve",
    "global_mass",
    "ModelParams",
    "Field",
    "RunRecord",
    "run",
    "run_spectral",
    "steady_states",
    "k_star",
    "local_l2",
    "lyapunov_H",
    "fit_decay",
    "__version__",
]
