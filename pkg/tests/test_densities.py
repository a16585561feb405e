import numpy as np
import pytest
from scipy.integrate import quad

from hypcurv.densities import F_phi, G_psi, f_of_b, f_phi, g_psi


def test_g_of_log_tanh_is_cosh():
    for r in (0.5, 1.0, 2.0):
        assert g_psi(np.log(np.tanh(r))) == pytest.approx(np.cosh(r), rel=1e-12)


def test_f_of_minus_log_tanh_is_cosh_power():
    for m in (1, 2):
        for h in (0.5, 1.0):
            assert f_phi(-np.log(np.tanh(h)), m) == pytest.approx(
                np.cosh(h) ** (m + 1), rel=1e-12
            )


def test_G_small_argument_asymptotics():
    t = 1e-6
    assert G_psi(-t) / (-np.sqrt(2.0 * t)) == pytest.approx(1.0, rel=1e-2)


def test_F_normalized_at_one():
    for m in (1, 2):
        assert abs(F_phi(1.0, m)) < 1e-15


def test_F_prime_matches_f_by_finite_differences():
    step = 1e-5
    for m in (1, 2):
        for u in (0.1, 1.0, 3.0):
            fd = (F_phi(u + step, m) - F_phi(u - step, m)) / (2.0 * step)
            assert fd == pytest.approx(f_phi(u, m), rel=1e-8)


def test_F_differences_match_adaptive_quadrature():
    # independent oracle: adaptive quadrature of f against the closed form
    for m in (1, 2):
        for a, b in [(0.2, 0.9), (0.5, 2.0), (1.0, 4.0)]:
            val, err = quad(lambda s: f_phi(s, m), a, b, epsabs=1e-12, epsrel=1e-12)
            assert F_phi(b, m) - F_phi(a, m) == pytest.approx(val, rel=1e-8)


def test_G_monotone_and_negative():
    v = np.linspace(-4.0, -1e-4, 200)
    vals = G_psi(v)
    assert np.all(np.diff(vals) > 0)
    assert np.all(vals < 0)
    assert np.all(vals <= v)  # G(v) <= v


def test_F_large_argument_stable():
    # the m=2 form stays accurate far into the tail: F(u) ~ u + ln 2 - 1 + C2
    for u in (15.0, 40.0, 100.0):
        tail = F_phi(u, 2) - (u + np.log(2.0) - 1.0)
        assert tail == pytest.approx(F_phi(50.0, 2) - (50.0 + np.log(2.0) - 1.0), abs=1e-10)


def test_domain_errors():
    with pytest.raises(ValueError):
        f_phi(0.0, 1)
    with pytest.raises(ValueError):
        f_phi(-1.0, 2)
    with pytest.raises(ValueError):
        g_psi(0.0)
    with pytest.raises(ValueError):
        G_psi(np.array([-1.0, 0.5]))
    with pytest.raises(ValueError):
        F_phi(-0.2, 1)


def test_f_of_b_consistency():
    b = np.array([0.2, 0.5, 0.9])
    for m in (1, 2):
        assert np.allclose(f_of_b(b, m), f_phi(-np.log(b), m), rtol=1e-13)
