import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from cwlt.window import (
    G,
    G_abs,
    G_magnitude_inverse,
    G_peak,
    WindowSpec,
    alpha_of_tau0,
    chirp_correction,
    chirp_gain,
    g,
    g_hat,
    g_hat_inverse,
    moment_In,
    satisfies_window_assumptions,
)

from oracles import ALPHA_TAU0_8, FINV_HALF, I1, I2, I3

finite = dict(allow_nan=False, allow_infinity=False)


def G_trapezoid(xi, lam):
    # trapezoid rule converges geometrically for this smooth Gaussian-decaying integrand
    t = np.linspace(-12.0, 12.0, 48001)
    h = t[1] - t[0]
    return np.sum(g(t) * np.exp(-2j * np.pi * xi * t + 1j * np.pi * lam * t * t)) * h


def test_alpha_default():
    assert WindowSpec().alpha == pytest.approx(ALPHA_TAU0_8, abs=1e-15)
    assert alpha_of_tau0(0.125) == pytest.approx(ALPHA_TAU0_8, abs=1e-15)


def test_alpha_is_essential_support_radius():
    for tau0 in (0.5, 0.125, 1e-3):
        assert g_hat(alpha_of_tau0(tau0)) == pytest.approx(tau0, rel=1e-12)


@pytest.mark.parametrize("tau0", [0.0, 1.0, -0.1, 2.0])
def test_alpha_rejects_bad_tau0(tau0):
    with pytest.raises(ValueError):
        alpha_of_tau0(tau0)


def test_g_normalised_and_ghat_matches_quadrature():
    assert quad(g, -np.inf, np.inf)[0] == pytest.approx(1.0, abs=1e-12)
    for xi in (0.0, 0.2, 0.7):
        re = quad(lambda t: g(t) * np.cos(2 * np.pi * xi * t), -np.inf, np.inf)[0]
        assert re == pytest.approx(g_hat(xi), abs=1e-10)


def test_ghat_inverse():
    assert g_hat_inverse(0.5) == pytest.approx(FINV_HALF, abs=1e-14)
    assert g_hat_inverse(1.0) == 0.0
    y = np.linspace(0.01, 0.99, 50)
    np.testing.assert_allclose(g_hat(g_hat_inverse(y)), y, rtol=1e-12)


def test_moments():
    assert moment_In(1) == pytest.approx(I1, abs=1e-15)
    assert moment_In(2) == pytest.approx(I2, abs=1e-15)
    assert moment_In(3) == pytest.approx(I3, abs=1e-15)
    for n in (1, 2, 3):
        q = 2 * quad(lambda t: t**n * g(t), 0, np.inf, epsabs=1e-14)[0]
        assert moment_In(n) == pytest.approx(q, abs=1e-10)
    with pytest.raises(ValueError):
        moment_In(4)


def test_G_reduces_to_ghat_without_chirp():
    xi = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(G(xi, 0.0), g_hat(xi), atol=1e-15)


@pytest.mark.parametrize("xi,lam", [(0.0, 0.0), (0.3, 1.0), (-1.2, -4.0), (2.0, 10.0), (0.05, -0.3)])
def test_G_against_quadrature(xi, lam):
    assert abs(G(xi, lam) - G_trapezoid(xi, lam)) < 1e-10


def test_G_peak_closed_form():
    lam = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(G_peak(lam), (1 + (2 * np.pi * lam) ** 2) ** -0.25, rtol=1e-14)
    np.testing.assert_allclose(np.abs(G(0.0, lam)), G_peak(lam), rtol=1e-14)


@given(st.floats(-20, 20, **finite))
def test_correction_cancels_peak(lam):
    c = chirp_correction(lam)
    assert c.real > 0
    assert abs(c * G(0.0, lam) - 1) < 1e-12
    assert abs(c) == pytest.approx(chirp_gain(lam), rel=1e-12)
    assert chirp_gain(lam) >= 1.0


@given(st.floats(-10, 10, **finite), st.floats(0.01, 0.99))
def test_G_magnitude_inverse_round_trip(lam, frac):
    y = frac * G_peak(lam)
    xi = G_magnitude_inverse(y, lam)
    assert xi >= 0
    assert G_abs(xi, lam) == pytest.approx(y, rel=1e-9)


def test_G_magnitude_inverse_domain():
    with pytest.raises(ValueError):
        G_magnitude_inverse(1.0, 0.5)
    with pytest.raises(ValueError):
        G_magnitude_inverse(0.0, 0.5)


def test_window_assumptions_hold_for_gaussian():
    assert satisfies_window_assumptions()
