import math

import numpy as np
import pytest

import canspec as cs


def test_free_angle_is_linear(zero_pot):
    # theta' = lam for the zero potential
    for lam, gamma in ((1.0, 0.0), (-2.5, 1.0), (0.3, math.pi / 2.0)):
        sol = cs.integrate_angle(zero_pot, lam, gamma)
        assert sol.theta_end == pytest.approx(gamma + lam * math.pi,
                                              abs=1e-10)


def test_scalar_angle_shifts_rate():
    c = 1.5
    spec = cs.PotentialSpec.scalar_identity(c)
    sol = cs.integrate_angle(spec, 2.0, 0.7)
    assert sol.theta_end == pytest.approx(0.7 + (2.0 - c) * math.pi, abs=1e-10)


def test_worked_example_angle_fixed_point(sigma1):
    # theta' = -sin 2theta at lam = 0 keeps theta = 0 frozen
    sol = cs.integrate_angle(sigma1, 0.0, 0.0)
    assert sol.theta_end == pytest.approx(0.0, abs=1e-12)
    assert sol.winding_hint == 0


def test_gamma_domain(zero_pot):
    with pytest.raises(ValueError):
        cs.integrate_angle(zero_pot, 1.0, math.pi)
    with pytest.raises(ValueError):
        cs.integrate_angle(zero_pot, 1.0, -0.1)


def test_angle_continuity_in_lambda(random_potentials):
    spec = random_potentials[0]
    for lam in (-2.4, 0.8, 3.9):
        a = cs.integrate_angle(spec, lam, 0.3).theta_end
        b = cs.integrate_angle(spec, lam + 1e-6, 0.3).theta_end
        assert abs(b - a) <= 1e-3


def test_angle_strictly_increasing_in_lambda(random_potentials):
    spec = random_potentials[1]
    for lam in (-3.1, 0.4, 2.2):
        a = cs.integrate_angle(spec, lam, 0.9).theta_end
        b = cs.integrate_angle(spec, lam + 2e-9, 0.9).theta_end
        assert b > a


def test_angle_monotone_in_gamma(random_potentials):
    spec = random_potentials[2]
    gammas = (0.0, 0.7, 1.4, 2.2, 3.0)
    for lam in (-1.7, 2.6):
        ends = [cs.integrate_angle(spec, lam, g).theta_end for g in gammas]
        assert all(x < y for x, y in zip(ends, ends[1:]))


def test_free_eigenvalues(zero_pot):
    assert cs.find_mu(zero_pot, 3).value == pytest.approx(3.0, abs=1e-10)
    assert cs.find_nu(zero_pot, -2).value == pytest.approx(-2.0, abs=1e-10)


def test_scalar_eigenvalues():
    c = 1.5
    spec = cs.PotentialSpec.scalar_identity(c)
    assert cs.find_mu(spec, 2).value == pytest.approx(2.0 + c, abs=1e-10)
    assert cs.find_nu(spec, 1).value == pytest.approx(1.0 + c, abs=1e-10)


def test_worked_example_eigenvalues(sigma1):
    mu0 = cs.find_mu(sigma1, 0)
    nu0 = cs.find_nu(sigma1, 0)
    assert mu0.value == pytest.approx(0.0, abs=1e-10)
    assert nu0.value == pytest.approx(0.0, abs=1e-10)
    assert mu0.residual <= 1e-10
    assert nu0.residual <= 1e-10


def test_residual_contract(random_potentials):
    for spec in random_potentials:
        for n in (-2, 0, 1):
            assert cs.find_mu(spec, n).residual <= 1e-10
            assert cs.find_nu(spec, n).residual <= 1e-10


def test_interlacing(random_potentials, sigma1):
    for spec in random_potentials + [sigma1]:
        mus = {n: cs.find_mu(spec, n).value for n in range(-4, 5)}
        nus = {n: cs.find_nu(spec, n).value for n in range(-4, 5)}
        for n in range(-4, 4):
            assert max(mus[n], nus[n]) < min(mus[n + 1], nus[n + 1])


def test_eigenvalue_offdiagonal_cross_check(random_potentials):
    spec = random_potentials[0]
    for n in (-1, 0, 2):
        mu = cs.find_mu(spec, n).value
        nu = cs.find_nu(spec, n).value
        m_mu = cs.monodromy(spec, mu)
        m_nu = cs.monodromy(spec, nu)
        assert abs(m_mu.y12) <= 1e-7
        assert abs(m_nu.y21) <= 1e-7
        sign = -1.0 if n % 2 else 1.0
        assert sign * m_mu.delta >= 2.0 - 1e-7
        assert sign * m_nu.delta >= 2.0 - 1e-7


def test_shifted_curve_constant_potential(sigma1):
    taus = np.linspace(0.0, math.pi, 8)
    curve = cs.shifted_mu_curve(sigma1, 0, taus)
    assert all(abs(v) <= 1e-9 for _, v in curve)


def test_shifted_curve_scalar_mean_only():
    # theta(pi) = lam*pi - int p for Q = p I, so mu_n(tau) = n + mean(p)
    p = cs.ScalarFunction.trigpoly(0.0, (1.0,))
    spec = cs.PotentialSpec.scalar_identity(p)
    taus = np.linspace(0.0, math.pi, 6)
    curve = cs.shifted_mu_curve(spec, 2, taus)
    for _, v in curve:
        assert v == pytest.approx(2.0, abs=1e-9)


def test_bracket_failure_message(zero_pot):
    from canspec._roots import expand_bracket

    with pytest.raises(cs.BracketFailure):
        expand_bracket(lambda x: -1.0, 0.0)
