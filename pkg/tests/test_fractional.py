import math

import numpy as np
import pytest
from scipy.special import gamma

from fracfield.fractional import (
    History,
    TimeGrid,
    caputo_l1,
    check_exchange,
    check_power_inequality,
    l1_weights,
    rl_integral,
)


def test_l1_weights_values():
    w = l1_weights(0.5, 2)
    assert w.b[0] == 1.0
    assert w.b[1] == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)
    w3 = l1_weights(0.9, 3).b
    assert np.all(np.diff(w3) < 0.0) and np.all(w3 > 0.0)
    with pytest.raises(ValueError):
        l1_weights(1.0, 4)
    with pytest.raises(ValueError):
        l1_weights(0.5, 0)


def test_caputo_constant_is_zero():
    grid = TimeGrid(dt=0.1, n_steps=30)
    d = caputo_l1(History(grid=grid, levels=np.full(31, 3.7)), 0.6)
    assert np.max(np.abs(d)) == 0.0


def test_caputo_exact_for_affine():
    grid = TimeGrid(dt=0.037, n_steps=50)
    t = grid.times
    d = caputo_l1(History(grid=grid, levels=2.0 + 5.0 * t), 0.4)
    exact = 5.0 * t[1:] ** 0.6 / gamma(1.6)
    assert np.max(np.abs(d - exact)) <= 1e-12


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_caputo_power_rule_convergence(alpha):
    errs = []
    for n in (64, 128, 256, 512, 1024):
        grid = TimeGrid(dt=1.0 / n, n_steps=n)
        t = grid.times
        d = caputo_l1(History(grid=grid, levels=t**2), alpha)
        exact = 2.0 * t[1:] ** (2.0 - alpha) / gamma(3.0 - alpha)
        errs.append(np.max(np.abs(d - exact)))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert min(orders) >= 2.0 - alpha - 0.2


def test_caputo_linearity():
    rng = np.random.default_rng(3)
    grid = TimeGrid(dt=0.02, n_steps=40)
    u, v = rng.random(41), rng.random(41)
    lhs = caputo_l1(History(grid=grid, levels=1.5 * u - 2.5 * v), 0.5)
    rhs = 1.5 * caputo_l1(History(grid=grid, levels=u), 0.5) - 2.5 * caputo_l1(
        History(grid=grid, levels=v), 0.5
    )
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_caputo_needs_two_levels():
    h = History(grid=TimeGrid(dt=0.1, n_steps=0), levels=np.array([1.0]))
    with pytest.raises(ValueError):
        caputo_l1(h, 0.5)


def test_rl_integral_exact_for_constants():
    grid = TimeGrid(dt=0.01, n_steps=200)
    for alpha in (0.3, 0.8):
        I = rl_integral(History(grid=grid, levels=np.ones(201)), alpha)
        exact = grid.times[1:] ** alpha / gamma(alpha + 1.0)
        assert np.max(np.abs(I - exact)) <= 1e-13


def test_rl_integral_classical_limit():
    grid = TimeGrid(dt=0.001, n_steps=1000)
    I = rl_integral(History(grid=grid, levels=grid.times), 0.999999)
    assert np.max(np.abs(I - grid.times[1:] ** 2 / 2.0)) <= 1e-3


def test_composition_returns_history():
    errs = []
    for n in (200, 400, 800):
        grid = TimeGrid(dt=1.0 / n, n_steps=n)
        u = np.cos(grid.times) + 2.0
        d = caputo_l1(History(grid=grid, levels=u), 0.6)
        padded = History(grid=grid, levels=np.concatenate([[0.0], d]))
        I = rl_integral(padded, 0.6)
        errs.append(np.max(np.abs(I + u[0] - u[1:])))
    assert errs[0] > errs[1] > errs[2]


def test_power_inequality_constant_series():
    grid = TimeGrid(dt=0.01, n_steps=100)
    rep = check_power_inequality(History(grid=grid, levels=np.full(101, 0.8)), 0.5, 3)
    assert rep.min_margin == 0.0 and rep.passed


@pytest.mark.parametrize(
    "series,alpha,n",
    [("affine", 0.5, 2), ("expdec", 0.7, 3)],
)
def test_power_inequality_reference_series(series, alpha, n):
    grid = TimeGrid(dt=1e-3, n_steps=1000)
    t = grid.times
    u = 1.0 + t if series == "affine" else np.exp(-t)
    rep = check_power_inequality(History(grid=grid, levels=u), alpha, n)
    assert rep.passed, rep.min_margin


def test_power_inequality_rejects_bad_input():
    grid = TimeGrid(dt=0.01, n_steps=10)
    with pytest.raises(ValueError):
        check_power_inequality(History(grid=grid, levels=np.linspace(-1, 1, 11)), 0.5, 2)
    with pytest.raises(ValueError):
        check_power_inequality(History(grid=grid, levels=np.ones(11)), 0.5, 1)


def test_exchange_residuals():
    rng = np.random.default_rng(8)
    lv = rng.random((16, 6, 6))
    h = History(grid=TimeGrid(dt=1.0, n_steps=15), levels=lv)
    mask = np.zeros((6, 6), dtype=bool)
    mask[1:4, 2:5] = True
    assert check_exchange(h, 0.5, mask, cell_volume=0.25) <= 1e-12
    empty = np.zeros((6, 6), dtype=bool)
    assert check_exchange(h, 0.5, empty) == 0.0
    single = np.zeros((6, 6), dtype=bool)
    single[3, 3] = True
    assert check_exchange(h, 0.5, single, cell_volume=1.0) <= 1e-15
    with pytest.raises(ValueError):
        check_exchange(h, 0.5, np.zeros((5, 5), dtype=bool))


def test_history_validation():
    grid = TimeGrid(dt=0.1, n_steps=3)
    with pytest.raises(ValueError):
        History(grid=grid, levels=np.ones(3))
    with pytest.raises(ValueError):
        History(grid=grid, levels=np.array([1.0, 2.0, np.nan, 3.0]))
    with pytest.raises(ValueError):
        TimeGrid(dt=0.0, n_steps=3)
