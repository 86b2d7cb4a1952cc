import numpy as np
import pytest
from scipy import integrate

from bayesindices.errors import ConvergenceError
from bayesindices.quadrature import adaptive_gauss_kronrod, batched_log_integral


def test_polynomial_exact():
    # K15 integrates low-degree polynomials exactly
    val, err = adaptive_gauss_kronrod(lambda x: 3 * x**2, 0.0, 2.0)
    assert val == pytest.approx(8.0, abs=1e-12)


def test_gaussian_against_scipy():
    f = lambda x: np.exp(-0.5 * x * x)
    val, _ = adaptive_gauss_kronrod(f, -10.0, 10.0, rel_tol=1e-12)
    ref, _ = integrate.quad(lambda x: float(np.exp(-0.5 * x * x)), -10, 10, epsabs=0, epsrel=1e-13)
    assert val == pytest.approx(ref, rel=1e-12)


def test_sharp_peak_needs_adaptivity():
    # narrow bump far from panel edges; uniform panels alone would miss it
    f = lambda x: np.exp(-((x - 0.123456) / 1e-4) ** 2)
    val, _ = adaptive_gauss_kronrod(f, 0.0, 1.0, rel_tol=1e-9, initial_subdivisions=4)
    assert val == pytest.approx(1e-4 * np.sqrt(np.pi), rel=1e-8)


def test_panel_cap_raises():
    rng = np.random.default_rng(0)
    noisy = lambda x: rng.standard_normal(x.shape)
    with pytest.raises(ConvergenceError):
        adaptive_gauss_kronrod(noisy, 0.0, 1.0, rel_tol=1e-12, max_panels=32)


def test_inverted_interval_raises():
    with pytest.raises(ConvergenceError):
        adaptive_gauss_kronrod(lambda x: x, 1.0, 0.0)


def test_batched_log_integral_gaussians():
    # integral of exp(-(v-c)^2 / (2 s^2)) over a generous bracket
    centers = np.array([0.0, 1.0, 5.0])
    sigmas = np.array([1.0, 0.2, 3.0])

    def log_f(v, idx):
        return -0.5 * ((v - centers[idx, None]) / sigmas[idx, None]) ** 2

    lo = centers - 12 * sigmas
    hi = centers + 12 * sigmas
    got = batched_log_integral(log_f, lo, hi)
    expected = sigmas * np.sqrt(2 * np.pi)
    assert np.allclose(got, expected, rtol=1e-12)


def test_batched_log_integral_node_cap():
    # discontinuous integrand cannot settle at the doubling tolerance
    def log_f(v, idx):
        return np.where(v > 0.3333333, 0.0, -30.0)

    with pytest.raises(ConvergenceError):
        batched_log_integral(log_f, np.array([0.0]), np.array([1.0]),
                             rel_tol=1e-14, max_nodes=256)
