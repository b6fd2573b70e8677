"""Large-lambda expansion of the fundamental matrix for traceless potentials.

For Q in canonical form (q2 = -q1, so J Q = -Q J) with absolutely
continuous entries, the fundamental matrix admits

    Y(z) = e^{-lam J z} (I - Q(0)/(2 lam))
         + Q(z) e^{-lam J z} / (2 lam)
         + int_0^z e^{lam J (t - z)} / (2 lam) * (J Q^2 - Q') e^{-lam J t} dt
         + O(1 / lam^2)            (real lam)

and the coarser closed form obtained by dropping the oscillatory
derivative contribution,

    Y(z) = e^{-lam J z} [I - Q(0)/(2 lam) + J/(2 lam) int_0^z Q^2 dt]
         + e^{lam J z} Q(z) / (2 lam) + o(1 / lam).

``remainder_decay_check`` measures both defects against the numerical
fundamental matrix on a list of lambda values and reports log-log decay
slopes.  Matrix size throughout is the operator norm
max_j sqrt(sum_i c_ij^2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ACRequired, NotCanonicalForm
from .monodromy import monodromy
from .potential import PERIOD, evaluate
from .spectra import operator_norm

SIMPSON_INTERVALS = 512


def _rot_minus(lam, z):
    """e^{-lam J z} = [[cos, -sin], [sin, cos]] at angle lam*z."""
    c = math.cos(lam * z)
    s = math.sin(lam * z)
    return np.array([[c, -s], [s, c]])


def _rot_plus(lam, z):
    c = math.cos(lam * z)
    s = math.sin(lam * z)
    return np.array([[c, s], [-s, c]])


def _require_canonical_ac(spec, need_derivative):
    if not spec.is_canonical_form:
        raise NotCanonicalForm(
            "asymptotic forms are only available for traceless potentials")
    if need_derivative and not spec.is_ac:
        raise ACRequired(
            "sampled potentials carry no derivative; use trig-poly entries")


@dataclass(frozen=True)
class AsymptoticEvaluation:
    lam: float
    z: float
    leading: np.ndarray
    correction: np.ndarray
    integral_term: np.ndarray
    total: np.ndarray


def asymptotic_fundamental(spec, lam, z=PERIOD):
    """Full three-term expansion; error O(1/lam^2) for real lam."""
    _require_canonical_ac(spec, need_derivative=True)
    lam = float(lam)
    z = float(z)
    q0 = evaluate(spec, 0.0)
    qz = evaluate(spec, z)
    em = _rot_minus(lam, z)
    leading = em @ (np.eye(2) - q0 / (2.0 * lam))
    correction = qz @ em / (2.0 * lam)

    dq1 = spec.q1.derivative()
    dq = spec.q.derivative()
    n = SIMPSON_INTERVALS
    ts = np.linspace(0.0, z, n + 1)
    q1v = np.asarray(spec.q1(ts))
    qv = np.asarray(spec.q(ts))
    s2 = q1v * q1v + qv * qv          # Q^2 = (q1^2 + q^2) I for canonical Q
    dq1v = np.asarray(dq1(ts))
    dqv = np.asarray(dq(ts))

    # G(t) = J Q^2 - Q' ; exact oscillatory factors at the nodes.
    vals = np.empty((n + 1, 2, 2))
    for i, t in enumerate(ts):
        g = np.array([[-dq1v[i], s2[i] - dqv[i]],
                      [-s2[i] - dqv[i], dq1v[i]]])
        vals[i] = _rot_plus(lam, t - z) @ g @ _rot_minus(lam, t)
    h = z / n
    integral = (h / 3.0) * (vals[0] + vals[-1]
                            + 4.0 * vals[1:-1:2].sum(axis=0)
                            + 2.0 * vals[2:-1:2].sum(axis=0))
    integral_term = integral / (2.0 * lam)
    total = leading + correction + integral_term
    return AsymptoticEvaluation(lam=lam, z=z, leading=leading,
                                correction=correction,
                                integral_term=integral_term, total=total)


def coarse_asymptotic(spec, lam, z=PERIOD):
    """Single-rotation closed form; error o(1/lam). No Q' needed."""
    _require_canonical_ac(spec, need_derivative=False)
    lam = float(lam)
    z = float(z)
    q0 = evaluate(spec, 0.0)
    qz = evaluate(spec, z)
    s2_int = _q_square_integral(spec, z)
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    bracket = np.eye(2) - q0 / (2.0 * lam) + j * (s2_int / (2.0 * lam))
    return _rot_minus(lam, z) @ bracket + _rot_plus(lam, z) @ qz / (2.0 * lam)


def _q_square_integral(spec, z):
    """int_0^z (q1^2 + q^2) dt; closed form for trig-poly entries."""
    if spec.is_ac:
        s2 = spec.q1 * spec.q1 + spec.q * spec.q
        return float(s2.antiderivative_at(z))
    n = 4096
    ts = np.linspace(0.0, z, n + 1)
    vals = np.asarray(spec.q1(ts)) ** 2 + np.asarray(spec.q(ts)) ** 2
    return float(np.trapezoid(vals, ts))


@dataclass(frozen=True)
class DecayReport:
    lambdas: tuple
    err_full: tuple
    err_coarse: tuple
    slope_full: float | None
    slope_coarse: float | None
    exact: bool

    def passes(self, full_max=-1.7, coarse_max=-0.9):
        if self.exact:
            return True
        return self.slope_full <= full_max and self.slope_coarse <= coarse_max


def remainder_decay_check(spec, lambda_list, options=None):
    """Defect of both asymptotic forms at z = pi over increasing lambdas.

    Returns a DecayReport with per-lambda operator-norm errors and the
    slopes of log(error) against log(lambda).  Potentials that make both
    forms exact (plain rotation, zero potential) are flagged ``exact``
    with undefined slopes.
    """
    lams = [float(x) for x in lambda_list]
    if len(lams) < 2 or any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValueError("need at least two strictly increasing lambdas")
    err_full = []
    err_coarse = []
    for lam in lams:
        ynum = monodromy(spec, lam, options).a
        full = asymptotic_fundamental(spec, lam, PERIOD).total
        coarse = coarse_asymptotic(spec, lam, PERIOD)
        err_full.append(operator_norm(ynum - full))
        err_coarse.append(operator_norm(ynum - coarse))
    if max(max(err_full), max(err_coarse)) < 1e-11:
        return DecayReport(lambdas=tuple(lams), err_full=tuple(err_full),
                           err_coarse=tuple(err_coarse), slope_full=None,
                           slope_coarse=None, exact=True)
    loglam = np.log(np.abs(lams))
    slope_full = float(np.polyfit(loglam, np.log(err_full), 1)[0])
    slope_coarse = float(np.polyfit(loglam, np.log(err_coarse), 1)[0])
    return DecayReport(lambdas=tuple(lams), err_full=tuple(err_full),
                       err_coarse=tuple(err_coarse), slope_full=slope_full,
                       slope_coarse=slope_coarse, exact=False)
