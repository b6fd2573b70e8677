import math
from dataclasses import replace

import numpy as np
import pytest

import canspec as cs

# Closed-form oracle for the constant off-diagonal potential [[0,1],[1,0]]:
# M = -J(lam I - Q) satisfies M^2 = (1 - lam^2) I, so the discriminant is
# 2 cosh(pi sqrt(1 - lam^2)) for |lam| < 1 and 2 cos(pi sqrt(lam^2 - 1))
# beyond; |Delta| = 2 exactly where the argument hits integer multiples
# of pi, i.e. at lam^2 = 1 + j^2.


def sigma1_delta_oracle(lam):
    u = 1.0 - lam * lam
    if u >= 0.0:
        return 2.0 * math.cosh(math.pi * math.sqrt(u))
    return 2.0 * math.cos(math.pi * math.sqrt(-u))


def test_sigma1_oracle_against_numeric(sigma1):
    for lam in np.linspace(-3.0, 3.0, 13):
        assert cs.discriminant(sigma1, lam) == pytest.approx(
            sigma1_delta_oracle(lam), abs=1e-9)


def test_free_band_edges_collapse(zero_pot):
    table = cs.band_edges(zero_pot, (-2, 2))
    for k in range(-2, 3):
        lo, hi = table.periodic_pair(k)
        assert lo == pytest.approx(2.0 * k, abs=1e-9)
        assert hi == pytest.approx(2.0 * k, abs=1e-9)
        lo, hi = table.antiperiodic_pair(k)
        assert lo == pytest.approx(2.0 * k - 1.0, abs=1e-9)
        assert hi == pytest.approx(2.0 * k - 1.0, abs=1e-9)


def test_scalar_band_edges():
    p = cs.ScalarFunction.trigpoly(1.0, (1.0,))
    spec = cs.PotentialSpec.scalar_identity(p)
    table = cs.band_edges(spec, (-1, 1))
    for k in (-1, 0, 1):
        lo, hi = table.periodic_pair(k)
        assert lo == pytest.approx(2.0 * k + 1.0, abs=1e-8)
        assert hi == pytest.approx(2.0 * k + 1.0, abs=1e-8)
        lo, hi = table.antiperiodic_pair(k)
        assert lo == pytest.approx(2.0 * k, abs=1e-8)


def test_sigma1_central_gap(sigma1):
    table = cs.band_edges(sigma1, (0, 0))
    lo, hi = table.periodic_pair(0)
    assert lo == pytest.approx(-1.0, abs=1e-6)
    assert hi == pytest.approx(1.0, abs=1e-6)
    gaps = cs.instability_intervals(table)
    central = [g for g in gaps if g.index == 0][0]
    assert central.width == pytest.approx(2.0, abs=1e-6)
    assert central.parity == "periodic-edge"
    # all other computed gaps are collapsed (edges at lam^2 = 1 + j^2)
    for g in gaps:
        if g.index != 0:
            assert g.width <= 1e-8


def test_sigma1_higher_edges_match_oracle(sigma1):
    table = cs.band_edges(sigma1, (-1, 1))
    lo, hi = table.periodic_pair(1)
    assert lo == pytest.approx(math.sqrt(5.0), abs=1e-9)
    lo, hi = table.antiperiodic_pair(1)
    assert lo == pytest.approx(math.sqrt(2.0), abs=1e-9)


def test_gap_widths_nonnegative_and_indexed(random_potentials):
    table = cs.band_edges(random_potentials[0], (-2, 2))
    gaps = cs.instability_intervals(table)
    assert [g.index for g in gaps] == list(range(-5, 5))
    for g in gaps:
        assert g.width >= 0.0


def test_indexing_chain_random(random_potentials):
    for spec in random_potentials:
        table = cs.band_edges(spec, (-3, 3))
        assert table.validate(slack=1e-8)


def test_edge_residuals(random_potentials):
    table = cs.band_edges(random_potentials[1], (-2, 2))
    for comp in table.components.values():
        assert comp.lo_residual <= 1e-8
        assert comp.hi_residual <= 1e-8


def test_boundary_probes(sigma1):
    # |Delta| >= 2 inside each gap, |Delta| < 2 just outside the edges
    table = cs.band_edges(sigma1, (0, 0))
    for comp in table.components.values():
        eps = 1e-4 * max(1.0, abs(comp.lo))
        if not comp.collapsed:
            for lam in np.linspace(comp.lo, comp.hi, 16):
                assert abs(cs.discriminant(sigma1, lam)) >= 2.0 - 1e-10
        assert abs(cs.discriminant(sigma1, comp.lo - eps)) < 2.0
        assert abs(cs.discriminant(sigma1, comp.hi + eps)) < 2.0


def test_detect_double_free(zero_pot):
    assert cs.detect_double(zero_pot, 2.0, +1)
    assert cs.detect_double(zero_pot, 3.0, -1)


def test_detect_double_rejects_open_gap_edge(sigma1):
    # Y(pi, 1) = I + pi * M with nilpotent M != 0, hence not the identity
    assert not cs.detect_double(sigma1, 1.0, +1)


def test_detect_double_scalar():
    c = 1.5
    spec = cs.PotentialSpec.scalar_identity(c)
    assert cs.detect_double(spec, 2.0 + c, +1)


def test_detect_double_precondition(zero_pot):
    with pytest.raises(ValueError):
        cs.detect_double(zero_pot, 0.5, +1)


def test_collapsed_gap_second_derivative(zero_pot):
    # at a double eigenvalue the discriminant has a genuine extremum:
    # -parity * Delta'' > 0 with clearly nonzero magnitude
    table = cs.band_edges(zero_pot, (1, 1))
    for n, parity in ((2, 1), (1, -1)):
        comp = table.components[n]
        assert comp.collapsed
        assert cs.detect_double(zero_pot, comp.lo, parity)
        h = 1e-3
        stencil = [cs.discriminant(zero_pot, comp.lo + i * h)
                   for i in (-2, -1, 0, 1, 2)]
        second = (-stencil[0] + 16 * stencil[1] - 30 * stencil[2]
                  + 16 * stencil[3] - stencil[4]) / (12.0 * h * h)
        assert -parity * second > 1e-3


def test_classification_stable_under_tolerance_halving(random_potentials):
    spec = random_potentials[2]
    base = cs.band_edges(spec, (-1, 1))
    tight = replace(cs.DEFAULT_OPTIONS, rtol=cs.DEFAULT_OPTIONS.rtol / 2.0,
                    atol=cs.DEFAULT_OPTIONS.atol / 2.0)
    again = cs.band_edges(spec, (-1, 1), tight)
    for n in base.components:
        w1 = base.components[n].hi - base.components[n].lo
        w2 = again.components[n].hi - again.components[n].lo
        assert (w1 <= 1e-8) == (w2 <= 1e-8)


def test_shift_extrema_scalar_trivial():
    spec = cs.PotentialSpec.scalar_identity(2.0)
    report = cs.verify_shift_extrema(spec, (0, 1), tau_samples=8)
    assert not report.violations
    for row in report.rows:
        assert row.curve_min == pytest.approx(row.edge_lo, abs=1e-8)
        assert row.curve_max == pytest.approx(row.edge_hi, abs=1e-8)


def test_shift_extrema_sigma1_zero_row_skipped(sigma1):
    report = cs.verify_shift_extrema(sigma1, (0, 0), tau_samples=8)
    row = [r for r in report.rows if r.kind == "periodic" and r.k == 0][0]
    assert row.skipped
    assert "strictly inside" in row.note
    # the curve sits at 0 strictly inside (-1, 1)
    assert row.curve_min == pytest.approx(0.0, abs=1e-8)
    assert row.curve_max == pytest.approx(0.0, abs=1e-8)
    assert row.edge_lo < -0.9 and row.edge_hi > 0.9
    assert not report.violations


def test_shift_extrema_canonical(canonical_wiggle):
    report = cs.verify_shift_extrema(canonical_wiggle, (1, 1), tau_samples=32)
    assert not report.violations


def test_operator_norm():
    assert cs.operator_norm(np.eye(2)) == 1.0
    assert cs.operator_norm([[3.0, 0.0], [4.0, 0.0]]) == pytest.approx(5.0)
