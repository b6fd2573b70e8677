import json
import math

import numpy as np
import pytest

import canspec as cs
from canspec.potential import check_grid

GRID = np.linspace(0.0, math.pi, 64, endpoint=False)


def test_evaluate_zero(zero_pot):
    assert np.array_equal(cs.evaluate(zero_pot, 0.3), np.zeros((2, 2)))


def test_evaluate_constant_offdiag(sigma1):
    np.testing.assert_array_equal(cs.evaluate(sigma1, 1.7),
                                  [[0.0, 1.0], [1.0, 0.0]])


def test_evaluate_trigpoly_diag():
    spec = cs.PotentialSpec.canonical(cs.ScalarFunction.trigpoly(0.0, (1.0,)),
                                      cs.ScalarFunction.constant(0.0))
    np.testing.assert_allclose(cs.evaluate(spec, 0.0),
                               [[1.0, 0.0], [0.0, -1.0]], atol=1e-15)


def test_evaluate_symmetric_and_periodic(random_potentials):
    spec = random_potentials[0]
    for z in (0.1, 2.9, 17.3, -4.0):
        mat = cs.evaluate(spec, z)
        assert mat[0, 1] == mat[1, 0]
        np.testing.assert_allclose(mat, cs.evaluate(spec, z + math.pi),
                                   atol=1e-12)


def test_shift_constant_is_identity(sigma1):
    shifted = cs.shift(sigma1, 1.234)
    for z in GRID[:8]:
        np.testing.assert_array_equal(cs.evaluate(shifted, z),
                                      cs.evaluate(sigma1, z))


def test_shift_half_period_flips_cos():
    f = cs.ScalarFunction.trigpoly(0.0, (1.0,))
    g = f.shift(math.pi / 2.0)
    np.testing.assert_allclose(g(GRID), -f(GRID), atol=1e-15)


def test_shift_sampled_full_period():
    rng = np.random.default_rng(5)
    f = cs.ScalarFunction.sampled(rng.random(256))
    spec = cs.PotentialSpec(f, f, f)
    shifted = cs.shift(spec, math.pi)
    np.testing.assert_allclose(shifted.q1(GRID), spec.q1(GRID), atol=1e-12)


def test_shift_evaluate_commute(random_potentials):
    for spec in random_potentials:
        for tau in (0.37, 1.9):
            shifted = cs.shift(spec, tau)
            for z in GRID[::16]:
                np.testing.assert_allclose(cs.evaluate(shifted, z),
                                           cs.evaluate(spec, z + tau),
                                           atol=1e-12)


def test_gauge_rotate_quarter_turn():
    spec = cs.PotentialSpec.constant(1.0, -1.0, 0.0)
    rot = cs.gauge_rotate(spec, math.pi / 4.0)
    np.testing.assert_allclose(cs.evaluate(rot, 0.4),
                               [[0.0, -1.0], [-1.0, 0.0]], atol=1e-15)


def test_gauge_rotate_identity():
    spec = cs.PotentialSpec.canonical(cs.ScalarFunction.trigpoly(0.0, (0.5,)),
                                      cs.ScalarFunction.trigpoly(0.0, (), (0.3,)))
    rot = cs.gauge_rotate(spec, 0.0)
    np.testing.assert_allclose(rot.q1(GRID), spec.q1(GRID), atol=1e-15)
    np.testing.assert_allclose(rot.q(GRID), spec.q(GRID), atol=1e-15)


def test_gauge_rotate_to_diagonal():
    q1v, qv = 1.0, 0.5
    spec = cs.PotentialSpec.constant(q1v, -q1v, qv)
    omega = 0.5 * math.atan2(qv, q1v)
    rot = cs.gauge_rotate(spec, omega)
    m = math.hypot(q1v, qv)
    np.testing.assert_allclose(cs.evaluate(rot, 0.9),
                               [[m, 0.0], [0.0, -m]], atol=1e-14)


def test_gauge_rotate_requires_canonical(sigma1, scalar_cos):
    # sigma1 is traceless, scalar identity is not
    cs.gauge_rotate(sigma1, 0.3)
    with pytest.raises(cs.NotCanonicalForm):
        cs.gauge_rotate(scalar_cos, 0.3)


def test_gauge_rotate_round_trip(canonical_wiggle):
    spec = canonical_wiggle
    back = cs.gauge_rotate(cs.gauge_rotate(spec, 0.7), -0.7)
    for f, g in ((spec.q1, back.q1), (spec.q2, back.q2), (spec.q, back.q)):
        np.testing.assert_allclose(g(GRID), f(GRID), atol=1e-12)


def test_trace_split_scalar_constant():
    spec = cs.PotentialSpec.scalar_identity(2.0)
    split = cs.trace_split(spec)
    assert split.shift_constant == 2.0
    assert np.max(np.abs(split.tilde.q1(GRID))) == 0.0
    assert np.max(np.abs(split.tilde.q(GRID))) == 0.0


def test_trace_split_diagonal_constant():
    split = cs.trace_split(cs.PotentialSpec.constant(2.0, 0.0, 0.0))
    assert split.shift_constant == pytest.approx(1.0)
    np.testing.assert_allclose(cs.evaluate(split.tilde, 0.3),
                               [[1.0, 0.0], [0.0, -1.0]], atol=1e-15)
    assert split.h(0.7) == 0.0


def test_trace_split_traceless_fixed_point(sigma1):
    split = cs.trace_split(sigma1)
    assert split.shift_constant == 0.0
    np.testing.assert_allclose(cs.evaluate(split.tilde, 1.1),
                               cs.evaluate(sigma1, 1.1), atol=1e-15)


def test_trace_split_general(random_potentials):
    spec = random_potentials[1]
    split = cs.trace_split(spec)
    # traceless on the check grid
    assert cs.is_canonical_form(split.tilde, 1e-10)
    # gauge endpoints vanish
    assert abs(split.h(0.0)) < 1e-12
    assert abs(split.h(math.pi)) < 1e-12
    assert split.shift_constant == pytest.approx(
        (spec.q1.mean() + spec.q2.mean()) / 2.0)
    # reconstruction: Q = p I + e^{J h} Q~ e^{-J h}
    for z in GRID[::8]:
        h = split.h(z)
        ejh = np.array([[math.cos(h), math.sin(h)],
                        [-math.sin(h), math.cos(h)]])
        rebuilt = split.p(z) * np.eye(2) \
            + ejh @ cs.evaluate(split.tilde, z) @ ejh.T
        np.testing.assert_allclose(rebuilt, cs.evaluate(spec, z), atol=1e-10)


def test_trace_split_rejects_sampled():
    f = cs.ScalarFunction.sampled(np.ones(64))
    spec = cs.PotentialSpec(f, f, cs.ScalarFunction.constant(0.0))
    with pytest.raises(cs.ACRequired):
        cs.trace_split(spec)


def test_is_scalar_identity():
    assert cs.is_scalar_identity(cs.PotentialSpec.scalar_identity(3.0), 1e-12)
    assert not cs.is_scalar_identity(
        cs.PotentialSpec.constant(0.0, 0.0, 1.0), 1e-8)
    wavy = cs.PotentialSpec.scalar_identity(
        cs.ScalarFunction.trigpoly(2.0, (1.0,)))
    assert cs.is_scalar_identity(wavy, 1e-12)


def test_canonical_anticommutes_with_j(canonical_wiggle):
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    for z in check_grid():
        mat = cs.evaluate(canonical_wiggle, z)
        np.testing.assert_allclose(j @ mat, -mat @ j, atol=1e-12)


def test_derivative_and_antiderivative():
    f = cs.ScalarFunction.trigpoly(0.5, (1.0, 0.0, 0.25), (0.0, -0.5))
    df = f.derivative()
    eps = 1e-6
    for z in (0.2, 1.1, 2.8):
        fd = (f(z + eps) - f(z - eps)) / (2 * eps)
        assert df(z) == pytest.approx(fd, abs=1e-7)
    zs = np.linspace(0.0, math.pi, 2001)
    trapz = np.trapezoid(f(zs), zs)
    assert f.antiderivative_at(math.pi) == pytest.approx(trapz, abs=1e-8)
    assert f.antiderivative_at(0.0) == 0.0


def test_sampled_antiderivative_matches_trig():
    g = cs.ScalarFunction.trigpoly(0.3, (0.8,), (0.1,))
    zg = np.arange(2048) * (math.pi / 2048)
    s = cs.ScalarFunction.sampled(g(zg))
    for z in (0.5, 2.0, math.pi):
        assert s.antiderivative_at(z) == pytest.approx(
            g.antiderivative_at(z), abs=1e-6)


def test_fit_trigpoly_recovers_exact():
    f = cs.ScalarFunction.trigpoly(0.1, (0.5, -0.2), (0.0, 0.7))
    g = cs.ScalarFunction.fit_trigpoly(lambda z: f(z))
    assert g.degree == f.degree
    np.testing.assert_allclose(g.cos_coeffs, f.cos_coeffs, atol=1e-14)
    np.testing.assert_allclose(g.sin_coeffs, f.sin_coeffs, atol=1e-14)


def test_config_round_trip(tmp_path, random_potentials):
    spec = random_potentials[2]
    path = tmp_path / "pot.json"
    spec.save(path)
    again = cs.PotentialSpec.load(path)
    # coefficient-exact round trip
    assert again.q1.to_dict() == spec.q1.to_dict()
    assert again.q2.to_dict() == spec.q2.to_dict()
    assert again.q.to_dict() == spec.q.to_dict()


def test_config_round_trip_all_kinds(tmp_path):
    spec = cs.PotentialSpec(
        cs.ScalarFunction.constant(1.0 / 3.0),
        cs.ScalarFunction.trigpoly(0.1, (0.123456789012345,), (-7e-17,)),
        cs.ScalarFunction.sampled([0.0, 0.5, -0.25, 1.0 / 7.0]))
    path = tmp_path / "pot.json"
    spec.save(path)
    raw = json.loads(path.read_text())
    again = cs.PotentialSpec.from_dict(raw)
    assert again.q2.cos_coeffs == spec.q2.cos_coeffs
    assert again.q.samples == spec.q.samples
    assert again.q1.value == spec.q1.value


def test_sampled_flagged_not_ac():
    f = cs.ScalarFunction.sampled(np.zeros(16))
    assert not f.is_ac
    with pytest.raises(cs.ACRequired):
        f.derivative()
