import math

import numpy as np
import pytest

from fracfield.diagnostics import (
    C_GN_EMP,
    RegimeViolation,
    dissipation_delta_margin,
    estimate_gn_constant,
    fit_decay,
    k_star,
    local_l2,
    lyapunov_H,
    lyapunov_dissipation_check,
    steady_states,
)
from fracfield.kernels import Domain, build_kernel
from fracfield.solver import Field, ModelParams, run


def test_steady_states_reference_values():
    st = steady_states(ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.1))
    assert st.valid
    assert st.a == pytest.approx(0.1127016653792583, abs=1e-12)
    assert st.A == pytest.approx(0.8872983346207417, abs=1e-12)
    # verify by substitution mu u (1 - k u) = gamma
    for u in (st.a, st.A):
        assert 1.0 * u * (1.0 - 1.0 * u) == pytest.approx(0.1, abs=1e-12)
    assert 0.1 / 1.0 < st.a < st.A


def test_steady_states_degenerate_and_invalid():
    st = steady_states(ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.25))
    assert not st.valid and st.a == pytest.approx(0.5) and st.A == pytest.approx(0.5)
    st = steady_states(ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.3))
    assert not st.valid and math.isnan(st.a)
    st = steady_states(ModelParams(alpha=0.5, mu=1.0, k=0.0, gamma=0.3))
    assert not st.valid


def test_k_star_values_and_monotonicity():
    assert k_star(1, 5.0, 0.1) == 0.0
    assert k_star(2, 1.0, 0.5, C_GN=1.0) == pytest.approx(4.0, abs=1e-14)
    assert k_star(2, 1e-9, 0.5, C_GN=1.0) == pytest.approx(2.0, rel=1e-6)
    assert k_star(2, 2.0, 0.5, C_GN=1.0) > k_star(2, 1.0, 0.5, C_GN=1.0)
    assert k_star(2, 1.0, 0.25, C_GN=1.0) > k_star(2, 1.0, 0.5, C_GN=1.0)
    with pytest.raises(ValueError):
        k_star(2, 1.0, 0.5)
    with pytest.raises(ValueError):
        k_star(3, 1.0, 0.5, C_GN=1.0)


def test_local_l2_examples():
    dom = Domain(dim=1, half_width=5.0, points=256)
    zero = Field(domain=dom, values=np.zeros(dom.shape))
    assert local_l2(zero, (0.0,), 0.5) == 0.0
    const = Field(domain=dom, values=np.full(dom.shape, 1.5))
    # cube measure 2*delta = 1.0 up to the lattice quantization
    assert local_l2(const, (0.0,), 0.5) == pytest.approx(1.5**2 * 1.0, rel=0.05)
    rng = np.random.default_rng(4)
    u = Field(domain=dom, values=rng.random(dom.shape))
    from fracfield.kernels import ball_mask

    mask = ball_mask(dom, (1.0,), 0.7)
    direct = float(np.sum(u.values[mask] ** 2) * dom.cell_volume)
    assert local_l2(u, (1.0,), 0.7) == direct


def test_local_l2_warns_beyond_certified_window():
    dom = Domain(dim=1, half_width=5.0, points=64)
    u = Field(domain=dom, values=np.ones(dom.shape))
    with pytest.warns(UserWarning):
        local_l2(u, (0.0,), 0.6, delta0=1.0)


def test_lyapunov_H_values_and_guards():
    p = ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.2)
    st = steady_states(p)
    dom = Domain(dim=1, half_width=2.0, points=256)
    zero = Field(domain=dom, values=np.zeros(dom.shape))
    assert lyapunov_H(zero, (0.0,), 0.5, st) == 0.0
    # quadratic expansion h(eps) ~ eps^2 (A - a) / (2 a A)
    eps = 1e-3
    ue = Field(domain=dom, values=np.full(dom.shape, eps))
    measure = 2 * 0.5
    expected = measure * eps**2 * (st.A - st.a) / (2.0 * st.a * st.A)
    assert lyapunov_H(ue, (0.0,), 0.5, st) == pytest.approx(expected, rel=0.02)
    rng = np.random.default_rng(9)
    urand = Field(domain=dom, values=0.9 * st.a * rng.random(dom.shape))
    assert lyapunov_H(urand, (0.0,), 0.5, st) > 0.0
    bad = Field(domain=dom, values=np.full(dom.shape, st.a + 0.01))
    with pytest.raises(RegimeViolation):
        lyapunov_H(bad, (0.0,), 0.5, st)
    invalid = steady_states(ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.3))
    with pytest.raises(RegimeViolation):
        lyapunov_H(zero, (0.0,), 0.5, invalid)


def test_dissipation_delta_margin_signs():
    p = ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.2)
    st = steady_states(p)
    assert dissipation_delta_margin(st, 0.15, p.mu, p.k, 0.1) < 0.0
    with pytest.raises(RegimeViolation):
        dissipation_delta_margin(st, st.a + 0.01, p.mu, p.k, 0.1)


def _lyapunov_run(dt=1e-3, points=128):
    p = ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.2)
    dom = Domain(dim=1, half_width=1.0, points=points)
    J = build_kernel(dom, "box", radius=0.5)
    r2 = sum(g * g for g in dom.coord_grids())
    u0 = Field(domain=dom, values=0.15 * np.exp(-r2 / (2 * 0.2**2)))
    return run(u0, p, J, T=0.5, dt=dt, keep_history=True, probe_delta=0.1)


def test_lyapunov_dissipation_check_passes_in_regime():
    rec = _lyapunov_run()
    rep = lyapunov_dissipation_check(rec, delta=0.1)
    assert rep["passed"]
    assert rep["max_margin"] <= rep["tol"]
    assert rep["smallness_margin"] <= 0.0


def test_lyapunov_dissipation_check_guards():
    rec = _lyapunov_run()
    with pytest.raises(RegimeViolation):
        lyapunov_dissipation_check(rec, delta=0.3)  # beyond half delta0
    p = ModelParams(alpha=0.5, mu=1.0, k=1.0, gamma=0.2)
    dom = Domain(dim=1, half_width=1.0, points=64)
    J = build_kernel(dom, "box", radius=0.5)
    high = Field(domain=dom, values=np.full(dom.shape, 0.5))  # above a
    rec2 = run(high, p, J, T=0.05, dt=0.01, keep_history=True)
    with pytest.raises(RegimeViolation):
        lyapunov_dissipation_check(rec2, delta=0.1)
    rec3 = _lyapunov_run()
    rec3.fields = None
    with pytest.raises(ValueError):
        lyapunov_dissipation_check(rec3, delta=0.1)


def test_fit_decay_conventions():
    dom = Domain(dim=1, half_width=5.0, points=64)
    J = build_kernel(dom, "box", radius=1.0)
    p = ModelParams(alpha=0.5, mu=1e-12, k=1.0, gamma=0.5)
    zero = run(Field(domain=dom, values=np.zeros(dom.shape)), p, J, T=0.2, dt=0.01)
    fit = fit_decay(zero)
    assert fit.applicable and fit.violation == 0.0
    grow = ModelParams(alpha=0.5, mu=2.0, k=0.5, gamma=0.1)
    rec = run(Field(domain=dom, values=np.full(dom.shape, 0.5)), grow, J, T=0.5, dt=0.01)
    fit = fit_decay(rec)
    assert not fit.applicable


def test_gn_estimator_properties():
    dom = Domain(dim=2, half_width=1.0, points=32)
    c10 = estimate_gn_constant(dom, samples=10, seed=5)
    c30 = estimate_gn_constant(dom, samples=30, seed=5)
    assert 0.0 < c10 <= c30  # running maximum
    with pytest.raises(ValueError):
        estimate_gn_constant(Domain(dim=1, half_width=1.0, points=32), samples=5)


def test_gn_regression_constant():
    val = estimate_gn_constant(Domain(dim=2, half_width=1.0, points=64), samples=200, seed=1234)
    assert val == pytest.approx(C_GN_EMP, rel=1e-12)
