"""Scalar linear fractional ODEs  D^a w = A w + f(t),  w(0) = eta.

Two independent solution paths are provided:

* ``solve_exact``: the Mittag-Leffler representation
      w(t) = E_{a,1}(A t^a) eta
             + int_0^t (t-s)^{a-1} E_{a,a}(A (t-s)^a) f(s) ds,
  with the weakly singular convolution integrated in closed form per step
  (f piecewise constant) via  int_0^x s^{a-1} E_{a,a}(A s^a) ds
  = x^a E_{a,a+1}(A x^a),
* ``solve_l1``: implicit L1 time stepping.

Also here: the constant-forcing comparison cap u(0) + b T^a/(a Gamma(a)),
the integral-inequality majorant a E_b(theta t), and a small explicit
stepper plus power-series expansion for the quadratic growth equation
D^a w = mu w^2 used as a blow-up oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma, gammaln

from .fractional import TimeGrid, l1_weights
from .mlf import gronwall_E, ml_eval, ml_neg_array

__all__ = [
    "LinearFODE",
    "solve_exact",
    "solve_l1",
    "gronwall_majorant",
    "comparison_cap",
    "quadratic_series_coeffs",
    "quadratic_blowup_l1",
]


@dataclass(frozen=True)
class LinearFODE:
    """D^a w = A w + f, w(0) = eta; f is a constant or a sampled series."""

    alpha: float
    A: float
    eta: float
    f: float | np.ndarray = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha={self.alpha} outside (0, 1)")
        if not (np.isfinite(self.A) and np.isfinite(self.eta)):
            raise ValueError("A and eta must be finite")

    def forcing(self, grid: TimeGrid) -> np.ndarray:
        if np.isscalar(self.f):
            vals = np.full(grid.n_steps + 1, float(self.f))
        else:
            vals = np.asarray(self.f, dtype=float)
            if vals.shape != (grid.n_steps + 1,):
                raise ValueError("sampled forcing must have n_steps + 1 values")
        if not np.all(np.isfinite(vals)):
            raise ValueError("forcing contains non-finite values")
        return vals


def _ml_of_neg_or_pos(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """E_{alpha,beta}(x) for a 1-d array of arguments of one sign."""
    x = np.asarray(x, dtype=float)
    if np.all(x <= 0.0):
        return ml_neg_array(alpha, beta, -x)
    return np.array([ml_eval(alpha, beta, float(v)) for v in x])


def solve_exact(p: LinearFODE, grid: TimeGrid) -> np.ndarray:
    """Mittag-Leffler solution sampled on the grid (product quadrature in f).

    Exact for constant forcing; for sampled forcing f is frozen at the left
    endpoint of each step, which integrates the singular kernel exactly.
    """
    t = grid.times
    n = grid.n_steps
    a = p.alpha
    ta = t**a
    w = p.eta * _ml_of_neg_or_pos(a, 1.0, p.A * ta)
    f = p.forcing(grid)
    if np.any(f != 0.0):
        # G(t_m) = t_m^a E_{a,a+1}(A t_m^a); step weights are its increments
        G = ta * _ml_of_neg_or_pos(a, a + 1.0, p.A * ta)
        wts = np.diff(G)  # wts[m-1] = G_m - G_{m-1}, m = 1..n
        conv = np.convolve(wts, f[:n])[:n]
        w[1:] += conv
    return w


def solve_l1(p: LinearFODE, grid: TimeGrid) -> np.ndarray:
    """Implicit L1 stepping for D^a w = A w + f.

    Each step solves (c - A) w_n = c (w_{n-1} - H_n) + f(t_n) where c =
    dt^{-a}/Gamma(2-a) and H_n is the memory sum; raises on a singular
    step (c = A, impossible for A <= 0).
    """
    n = grid.n_steps
    a = p.alpha
    c = grid.dt ** (-a) / _gamma(2.0 - a)
    if c == p.A:
        raise ZeroDivisionError("implicit step is singular: dt^-a/Gamma(2-a) == A")
    b = l1_weights(a, n).b
    f = p.forcing(grid)
    w = np.empty(n + 1)
    w[0] = p.eta
    d = np.empty(n)  # increments w_m - w_{m-1}
    for j in range(1, n + 1):
        hist = float(np.dot(b[1:j][::-1], d[: j - 1])) if j > 1 else 0.0
        w[j] = (c * (w[j - 1] - hist) + f[j]) / (c - p.A)
        d[j - 1] = w[j] - w[j - 1]
    return w


def gronwall_majorant(a: float, b: float, beta: float, t: float) -> float:
    """Majorant a E_beta(theta t), theta = (b Gamma(beta))^{1/beta}.

    Bounds any nonnegative u with u(t) <= a + b int_0^t (t-s)^{beta-1} u ds.
    """
    if a < 0.0 or b < 0.0:
        raise ValueError("majorant needs a >= 0 and b >= 0")
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    if b == 0.0:
        return float(a)
    theta = (b * _gamma(beta)) ** (1.0 / beta)
    return float(a) * gronwall_E(beta, theta * t)


def comparison_cap(u0: float, b: float, alpha: float, T: float) -> float:
    """A-priori cap u0 + b T^a / (a Gamma(a)) for D^a u + c1 u <= b, u >= 0."""
    if u0 < 0.0 or b < 0.0:
        raise ValueError("cap needs u0 >= 0 and b >= 0")
    if not (0.0 < alpha < 1.0 and T > 0.0):
        raise ValueError("need alpha in (0,1) and T > 0")
    return u0 + b * T**alpha / (alpha * _gamma(alpha))


def quadratic_series_coeffs(alpha: float, mu: float, w0: float, nterms: int) -> np.ndarray:
    """Power-series coefficients of D^a w = mu w^2, w(0) = w0.

    w(t) = sum_k c_k t^{k a} with c_0 = w0 and
    c_{k+1} = mu (sum_{i<=k} c_i c_{k-i}) Gamma(k a + 1)/Gamma((k+1) a + 1).
    All coefficients are positive for w0 > 0, so the series has a finite
    radius of convergence: the solution blows up in finite time.
    """
    c = np.zeros(nterms)
    c[0] = w0
    for k in range(nterms - 1):
        conv = float(np.dot(c[: k + 1], c[k::-1]))
        ratio = np.exp(gammaln(k * alpha + 1.0) - gammaln((k + 1) * alpha + 1.0))
        c[k + 1] = mu * conv * ratio
    return c


def quadratic_blowup_l1(
    alpha: float, mu: float, w0: float, grid: TimeGrid, threshold: float = 1e6
) -> tuple[np.ndarray, bool, float]:
    """Explicit L1 stepping of D^a w = mu w^2 until the threshold.

    Returns (values-so-far, diverged, t_exceed); values stop at the first
    level beyond the threshold (or at T if it is never reached).
    """
    n = grid.n_steps
    c = grid.dt ** (-alpha) / _gamma(2.0 - alpha)
    b = l1_weights(alpha, n).b
    w = [float(w0)]
    d = np.empty(n)
    for j in range(1, n + 1):
        hist = float(np.dot(b[1:j][::-1], d[: j - 1])) if j > 1 else 0.0
        prev = w[-1]
        nxt = prev - hist + mu * prev * prev / c
        w.append(nxt)
        d[j - 1] = nxt - prev
        if not np.isfinite(nxt) or nxt > threshold:
            return np.array(w), True, j * grid.dt
    return np.array(w), False, np.inf
