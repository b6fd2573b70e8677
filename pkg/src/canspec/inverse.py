"""Gap-vanishing diagnostics and the scalar-identity rigidity check.

A potential of the form Q = p(z) I has every instability interval
collapsed: its fundamental matrix is the explicit rotation
Y(z) = e^{J (P(z) - lam z)} with P the antiderivative of p, so
Delta(lam) = 2 cos(lam pi - P(pi)) never leaves [-2, 2].  Conversely,
among symmetric potentials with absolutely continuous pi-periodic
entries, only scalar multiples of the identity have all gaps closed.

At finite resolution that converse direction cannot be certified: a
computation over indices |k| <= N can certify ``Q is NOT p*I`` from a
single open gap (sound), but closed gaps up to N are merely consistent
with the scalar-identity class.  The verdict enum keeps that epistemic
asymmetry explicit.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AssertionFailure
from .monodromy import DEFAULT_OPTIONS, monodromy
from .potential import (PERIOD, ScalarFunction, is_canonical_form,
                        is_scalar_identity)
from .spectra import band_edges, detect_double, instability_intervals


class PotentialClass(enum.Enum):
    SCALAR_IDENTITY = "scalar-identity"
    CANONICAL_FORM = "canonical-form"
    GENERAL = "general"


class InverseVerdict(enum.Enum):
    CERTIFIED_NOT_SCALAR_IDENTITY = "certified-not-scalar-identity"
    CONSISTENT_WITH_SCALAR_IDENTITY_UP_TO_N = \
        "consistent-with-scalar-identity-up-to-N"


def classify_potential(spec, tol=1e-9):
    if is_scalar_identity(spec, tol):
        return PotentialClass.SCALAR_IDENTITY
    if is_canonical_form(spec):
        return PotentialClass.CANONICAL_FORM
    return PotentialClass.GENERAL


@dataclass(frozen=True)
class GapReport:
    """Widths of all gaps with index |k| <= N plus the verdict."""

    n_gaps: int
    tol: float
    gap_widths: dict          # component index -> width
    max_width: float
    max_width_index: int
    all_vanish: bool
    potential_class: PotentialClass

    @property
    def verdict(self):
        if self.all_vanish:
            return f"AllVanish(tol={self.tol:g})"
        return (f"GapFound({self.max_width_index}, "
                f"{self.max_width:.6g})")


def gap_vanishing_report(spec, n_gaps, tol, options=None):
    """Compute every gap with band index k in [-N, N] and classify.

    ``all_vanish`` is true when no width exceeds ``tol``; otherwise the
    report points at the widest offending gap.
    """
    if n_gaps < 1:
        raise ValueError("need n_gaps >= 1")
    options = options or DEFAULT_OPTIONS
    table = band_edges(spec, (-n_gaps, n_gaps), options)
    widths = {iv.index: iv.width for iv in instability_intervals(table)}
    worst = max(widths, key=lambda j: widths[j])
    max_width = widths[worst]
    return GapReport(n_gaps=n_gaps, tol=tol, gap_widths=widths,
                     max_width=max_width, max_width_index=worst,
                     all_vanish=bool(max_width <= tol),
                     potential_class=classify_potential(spec))


@dataclass(frozen=True)
class ForwardCheckReport:
    n_gaps: int
    mean_shift: float         # (1/pi) int_0^pi p dt
    max_gap_width: float
    max_edge_error: float
    edges_checked: int


def forward_check(spec, n_gaps, tol, options=None, edge_tol=1e-6):
    """Verify the closed-form spectrum of a scalar-identity potential.

    With c the mean of p, the periodic eigenvalues sit (doubly) at
    2k + c and the anti-periodic ones at 2k - 1 + c.  Asserts that all
    gaps close within ``tol``, that every edge matches the closed form
    within ``edge_tol``, and that each collapsed edge is a genuine
    double eigenvalue of the period map.

    Raises AssertionFailure (carrying the offending index) on violation.
    """
    if not is_scalar_identity(spec, 1e-9):
        raise ValueError("forward check applies to scalar-identity potentials")
    options = options or DEFAULT_OPTIONS
    p = (spec.q1 + spec.q2) * 0.5
    c = p.mean()
    table = band_edges(spec, (-n_gaps, n_gaps), options)

    max_width = 0.0
    max_edge_err = 0.0
    checked = 0
    for k in range(-n_gaps, n_gaps + 1):
        for n, expected, parity in ((2 * k, 2 * k + c, 1),
                                    (2 * k - 1, 2 * k - 1 + c, -1)):
            comp = table.components[n]
            width = comp.hi - comp.lo
            max_width = max(max_width, width)
            if width > tol:
                raise AssertionFailure(
                    f"gap {n} has width {width:.3e} > {tol:g}", index=n)
            for edge in (comp.lo, comp.hi):
                err = abs(edge - expected)
                max_edge_err = max(max_edge_err, err)
                if err > edge_tol:
                    raise AssertionFailure(
                        f"edge of component {n} at {edge:.9f} differs from "
                        f"closed form {expected:.9f} by {err:.3e}", index=n)
            if not detect_double(spec, 0.5 * (comp.lo + comp.hi), parity,
                                 tol=max(1e-8, 10 * width), options=options):
                raise AssertionFailure(
                    f"collapsed edge of component {n} is not a double "
                    f"eigenvalue of the period map", index=n)
            checked += 1
    return ForwardCheckReport(n_gaps=n_gaps, mean_shift=c,
                              max_gap_width=max_width,
                              max_edge_error=max_edge_err,
                              edges_checked=checked)


@dataclass(frozen=True)
class ContrapositiveResult:
    verdict: InverseVerdict
    report: GapReport
    anomaly: str | None


def contrapositive_check(spec, n_gaps, tol, options=None):
    """Sound direction of gap rigidity at finite N.

    A gap wider than ``tol`` certifies that Q is not a scalar multiple
    of the identity (scalar-identity potentials have no open gaps at
    all).  If no gap is found the result is only *consistency* up to
    index N, never a certificate; when that happens for a potential that
    fails the pointwise scalar-identity test, the anomaly is recorded
    rather than raised.
    """
    report = gap_vanishing_report(spec, n_gaps, tol, options)
    if not report.all_vanish:
        return ContrapositiveResult(
            verdict=InverseVerdict.CERTIFIED_NOT_SCALAR_IDENTITY,
            report=report, anomaly=None)
    anomaly = None
    if report.potential_class is not PotentialClass.SCALAR_IDENTITY:
        anomaly = (f"no gap exceeding {tol:g} among |k| <= {n_gaps} although "
                   f"the potential is not pointwise scalar-identity; widest "
                   f"gap {report.max_width:.3e} at index "
                   f"{report.max_width_index}")
    return ContrapositiveResult(
        verdict=InverseVerdict.CONSISTENT_WITH_SCALAR_IDENTITY_UP_TO_N,
        report=report, anomaly=anomaly)


def closed_form_discriminant_scalar(p, lam):
    """Delta(lam) = 2 cos(lam pi - int_0^pi p dt) for Q = p I."""
    if isinstance(p, (int, float)):
        p = ScalarFunction.constant(p)
    return 2.0 * math.cos(lam * PERIOD - p.antiderivative_at(PERIOD))


def scalar_identity_fundamental(p, lam, z):
    """Y(z) = e^{J (P(z) - lam z)} for Q = p I, P the antiderivative."""
    if isinstance(p, (int, float)):
        p = ScalarFunction.constant(p)
    phi = p.antiderivative_at(z) - lam * z
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s], [-s, c]])


def free_dirac_discriminant(m, lam):
    """Delta for the constant potential m * diag(1, -1).

    2 cos(pi sqrt(lam^2 - m^2)) on the principal branch, continued as
    2 cosh(pi sqrt(m^2 - lam^2)) inside |lam| < m.
    """
    u = lam * lam - m * m
    if u >= 0.0:
        return 2.0 * math.cos(PERIOD * math.sqrt(u))
    return 2.0 * math.cosh(PERIOD * math.sqrt(-u))


def free_dirac_oracle_agreement(m, lambdas, options=None):
    """Max |Delta_numeric - closed form| for Q = m sigma_3 over lambdas."""
    from .potential import PotentialSpec

    spec = PotentialSpec.constant(m, -m, 0.0)
    worst = 0.0
    for lam in lambdas:
        delta = monodromy(spec, lam, options).delta
        worst = max(worst, abs(delta - free_dirac_discriminant(m, lam)))
    return worst
