import math

import numpy as np
import pytest
from scipy.special import erfc, gamma

from fracfield.mlf import (
    PrecisionLossError,
    check_complete_monotonicity,
    check_kernel_bound,
    check_sector_bound,
    fit_sector_constant,
    gronwall_E,
    ml_decay_envelope,
    ml_eval,
    ml_neg_array,
    recurrence_residual,
)

# value agreed between the extended-precision series and the erfc identity
# E_{1/2,1/2}(z) = z e^{z^2} erfc(-z) + 1/sqrt(pi)
REG_HALF_HALF = 0.13660600739194934


def test_exponential_identity():
    assert ml_eval(1.0, 1.0, -1.0) == pytest.approx(math.exp(-1.0), abs=1e-14)
    assert ml_eval(1.0, 1.0, 2.5) == pytest.approx(math.exp(2.5), rel=1e-13)


def test_cosine_zero():
    assert abs(ml_eval(2.0, 1.0, -((math.pi / 2) ** 2))) <= 1e-10


def test_value_at_zero_is_reciprocal_gamma():
    for beta in (0.5, 1.0, 1.7, 3.0):
        assert ml_eval(0.5, beta, 0.0) == pytest.approx(1.0 / gamma(beta), abs=1e-15)


def test_half_half_regression_against_erfc_identity():
    ident = -1.0 * math.exp(1.0) * erfc(1.0) + 1.0 / math.sqrt(math.pi)
    assert ident == pytest.approx(REG_HALF_HALF, abs=1e-15)
    assert ml_eval(0.5, 0.5, -1.0) == pytest.approx(REG_HALF_HALF, abs=1e-13)


def test_half_one_matches_erfc_on_a_range():
    for z in (-0.5, -2.0, -6.0, -20.0):
        ident = math.exp(z * z) * erfc(-z)
        assert ml_eval(0.5, 1.0, z) == pytest.approx(ident, rel=1e-11)


@pytest.mark.parametrize(
    "alpha,beta,z",
    [(0.0, 1.0, 0.0), (2.5, 1.0, 0.0), (0.5, 0.0, 0.0), (0.5, -1.0, 0.0)],
)
def test_rejects_bad_parameters(alpha, beta, z):
    with pytest.raises(ValueError):
        ml_eval(alpha, beta, z)


def test_rejects_nonfinite_argument():
    with pytest.raises(ValueError):
        ml_eval(0.5, 1.0, math.inf)
    with pytest.raises(ValueError):
        ml_eval(0.5, 1.0, math.nan)


def test_precision_loss_signalled_at_term_cap():
    # tiny order, argument near the series/asymptotic switch: the optimal
    # truncation index exceeds the 500-term cap
    with pytest.raises(PrecisionLossError):
        ml_eval(0.05, 1.0, 1.2)


def test_recurrence_identity_random():
    rng = np.random.default_rng(42)
    for _ in range(200):
        a = rng.uniform(0.05, 1.95)
        b = rng.uniform(0.1, 3.0)
        z = rng.uniform(-50.0, 5.0)
        assert recurrence_residual(a, b, z) <= 1e-8


def test_vector_matches_scalar_across_regimes():
    xs = np.exp(np.linspace(np.log(1e-3), np.log(1e6), 60))
    for a in (0.3, 0.7, 1.5):
        for b in (1.0, a + 1.0):
            vec = ml_neg_array(a, b, xs)
            ref = np.array([ml_eval(a, b, -x) for x in xs])
            assert np.max(np.abs(vec - ref) / np.abs(ref)) <= 1e-10


def test_band_surrogate_accuracy():
    a, b = 0.5, 1.5
    xs = np.exp(np.linspace(np.log(8**a * 1.01), np.log(40**a * 0.99), 300))
    fast = ml_neg_array(a, b, xs, band="cheb")
    exact = ml_neg_array(a, b, xs, band="mp")
    assert np.max(np.abs(fast - exact) / np.abs(exact)) <= 1e-10


def test_decay_envelope():
    assert ml_decay_envelope(1.0, 2.0, 1.0) == pytest.approx(math.exp(-2.0), abs=1e-14)
    assert ml_decay_envelope(0.5, 1.0, 0.0) == 1.0
    assert ml_decay_envelope(0.5, 1.0, 4.0) == pytest.approx(ml_eval(0.5, 1.0, -2.0), rel=1e-12)
    t = np.linspace(0.0, 5.0, 50)
    env = ml_decay_envelope(0.7, 1.3, t)
    assert np.all(np.diff(env) < 0.0)
    with pytest.raises(ValueError):
        ml_decay_envelope(0.5, -1.0, 1.0)
    with pytest.raises(ValueError):
        ml_decay_envelope(1.5, 1.0, 1.0)


def test_gronwall_majorant_function():
    assert gronwall_E(1.0, 1.0) == pytest.approx(math.e, rel=1e-13)
    assert gronwall_E(0.5, 0.0) == 1.0
    assert gronwall_E(0.5, 4.0) == pytest.approx(ml_eval(0.5, 1.0, 2.0), rel=1e-12)
    assert gronwall_E(2.5, 1.3) > 1.0  # beta > 2 supported on the positive axis
    with pytest.raises(ValueError):
        gronwall_E(0.5, -0.1)


def test_bound_predicates():
    grid = np.exp(np.linspace(np.log(1e-3), np.log(1e5), 150))
    for a in (0.3, 0.9):
        assert check_complete_monotonicity(a, grid)["passed"]
        assert check_kernel_bound(a, grid)["passed"]
        c = fit_sector_constant(a, 1.0, grid) * 1.01
        assert check_sector_bound(a, 1.0, c, grid)["passed"]
