import math

import numpy as np
import pytest
from scipy.special import gamma

from fracfield.fode import (
    LinearFODE,
    comparison_cap,
    gronwall_majorant,
    quadratic_blowup_l1,
    quadratic_series_coeffs,
    solve_exact,
    solve_l1,
)
from fracfield.fractional import TimeGrid
from fracfield.mlf import ml_decay_envelope


def test_pure_integral_of_constant_forcing():
    grid = TimeGrid(dt=0.01, n_steps=200)
    w = solve_exact(LinearFODE(alpha=0.5, A=0.0, eta=1.0, f=2.0), grid)
    exact = 1.0 + 2.0 * grid.times**0.5 / gamma(1.5)
    assert np.max(np.abs(w - exact)) <= 1e-13


def test_classical_limit_closed_form():
    grid = TimeGrid(dt=0.01, n_steps=200)
    w = solve_exact(LinearFODE(alpha=0.999999, A=-2.0, eta=0.0, f=3.0), grid)
    exact = 1.5 * (1.0 - np.exp(-2.0 * grid.times))
    assert np.max(np.abs(w - exact)) <= 1e-5


def test_homogeneous_decay_equals_envelope():
    grid = TimeGrid(dt=0.01, n_steps=300)
    w = solve_exact(LinearFODE(alpha=0.5, A=-1.5, eta=2.0, f=0.0), grid)
    env = 2.0 * ml_decay_envelope(0.5, 1.5, grid.times)
    assert np.max(np.abs(w - env)) <= 1e-9
    assert np.all(w > 0.0) and np.all(np.diff(w) < 0.0)


def test_l1_zero_solution():
    grid = TimeGrid(dt=0.01, n_steps=50)
    w = solve_l1(LinearFODE(alpha=0.5, A=-1.0, eta=0.0, f=0.0), grid)
    assert np.max(np.abs(w)) == 0.0


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("A", [-1.0, -2.0])
def test_l1_exact_horizon_agreement(alpha, A):
    # relative error at the horizon; the t->0 startup layer of L1 on
    # Mittag-Leffler solutions rules out a pointwise bound at this dt
    grid = TimeGrid(dt=1e-3, n_steps=1000)
    p = LinearFODE(alpha=alpha, A=A, eta=1.0, f=0.7)
    we, wl = solve_exact(p, grid), solve_l1(p, grid)
    assert abs(we[-1] - wl[-1]) / abs(we[-1]) <= 1e-3


def test_l1_refinement_decreases_horizon_error():
    errs = []
    for n in (125, 250, 500, 1000):
        grid = TimeGrid(dt=1.0 / n, n_steps=n)
        p = LinearFODE(alpha=0.5, A=-2.0, eta=1.0, f=0.0)
        we, wl = solve_exact(p, grid), solve_l1(p, grid)
        errs.append(abs(we[-1] - wl[-1]))
    assert all(errs[i] > errs[i + 1] for i in range(len(errs) - 1))


def test_l1_tracks_backward_euler_near_alpha_one():
    n = 500
    grid = TimeGrid(dt=1.0 / n, n_steps=n)
    w = solve_l1(LinearFODE(alpha=0.999, A=-1.0, eta=1.0, f=0.0), grid)
    be = np.empty(n + 1)
    be[0] = 1.0
    for j in range(1, n + 1):
        be[j] = be[j - 1] / (1.0 + grid.dt)
    assert np.max(np.abs(w - be) / np.abs(be)) <= 0.01


def test_comparison_cap_formula_and_containment():
    cap = comparison_cap(1.0, 2.0, 0.5, 1.0)
    assert cap == pytest.approx(1.0 + 4.0 / math.sqrt(math.pi), abs=1e-12)
    grid = TimeGrid(dt=1e-3, n_steps=1000)
    w = solve_exact(LinearFODE(alpha=0.5, A=-1.0, eta=1.0, f=2.0), grid)
    assert float(np.max(w)) <= cap + 1e-9
    with pytest.raises(ValueError):
        comparison_cap(-1.0, 1.0, 0.5, 1.0)


def test_gronwall_majorant_values():
    assert gronwall_majorant(3.0, 0.0, 0.5, 10.0) == 3.0
    assert gronwall_majorant(1.0, 1.0, 1.0, 2.0) == pytest.approx(math.exp(2.0), rel=1e-12)
    with pytest.raises(ValueError):
        gronwall_majorant(-1.0, 1.0, 0.5, 1.0)


def test_gronwall_contains_equality_instance():
    # w = a + b int (t-s)^{b-1} w ds realized as D^beta w = b Gamma(beta) w
    a0, b0, beta = 0.7, 0.8, 0.5
    grid = TimeGrid(dt=1e-3, n_steps=500)
    w = solve_l1(LinearFODE(alpha=beta, A=b0 * gamma(beta), eta=a0, f=0.0), grid)
    maj = np.array([gronwall_majorant(a0, b0, beta, float(t)) for t in grid.times])
    assert float(np.max(w - maj)) <= 1e-6


def test_singular_implicit_step_rejected():
    grid = TimeGrid(dt=1.0, n_steps=5)
    c = 1.0 / gamma(1.5)  # dt^{-1/2}/Gamma(2-1/2) at dt=1
    with pytest.raises(ZeroDivisionError):
        solve_l1(LinearFODE(alpha=0.5, A=c, eta=1.0, f=0.0), grid)


def test_forcing_validation():
    grid = TimeGrid(dt=0.1, n_steps=4)
    with pytest.raises(ValueError):
        solve_exact(LinearFODE(alpha=0.5, A=0.0, eta=0.0, f=np.array([1.0, 2.0])), grid)
    with pytest.raises(ValueError):
        solve_exact(
            LinearFODE(alpha=0.5, A=0.0, eta=0.0, f=np.array([1, 2, np.inf, 4, 5])), grid
        )


def test_sampled_forcing_matches_constant():
    grid = TimeGrid(dt=0.01, n_steps=100)
    pc = LinearFODE(alpha=0.6, A=-1.0, eta=0.5, f=0.3)
    ps = LinearFODE(alpha=0.6, A=-1.0, eta=0.5, f=np.full(101, 0.3))
    assert np.max(np.abs(solve_exact(pc, grid) - solve_exact(ps, grid))) == 0.0


def test_quadratic_blowup_series_and_stepper_agree():
    coeffs = quadratic_series_coeffs(0.5, 5.0, 2.0, 40)
    assert np.all(coeffs > 0.0)
    radius = coeffs[-1] ** (-1.0 / ((len(coeffs) - 1) * 0.5))
    w, diverged, t_div = quadratic_blowup_l1(0.5, 5.0, 2.0, TimeGrid(dt=1e-4, n_steps=20000))
    assert diverged and np.all(np.diff(w[:5]) > 0.0)
    # same order of magnitude as the series radius of convergence
    assert radius / 50 <= t_div <= radius * 50
