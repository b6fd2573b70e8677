"""Fundamental matrix, discriminant and Floquet multipliers.

The system J Y' + Q Y = lam Y with J = [[0, 1], [-1, 0]] is integrated as
Y' = -J (lam I - Q) Y from the identity initial condition.  The matrix
over one period A(lam) = Y(pi, lam) has unit determinant; its trace
Delta(lam) controls stability: |Delta| <= 2 gives bounded solutions,
|Delta| > 2 exponential dichotomy.

Entry naming convention used throughout (it matches the classical
oscillation-theory formulas): ``y_ij`` is component *j* of the solution
starting from the *i*-th standard basis vector, i.e. ``y12`` is entry
[1, 0] of the stored matrix and ``y21`` is entry [0, 1].
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _rk
from .errors import DerivativeMismatch, StepSizeUnderflow
from .potential import PERIOD

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class IntegratorOptions:
    """Knobs for the adaptive Runge-Kutta core.

    ``residual_tol`` is the acceptance threshold for the independent
    finite-difference residual check (see :func:`residual_estimate`);
    ``rtol``/``atol`` drive the per-step error control.
    """

    residual_tol: float = 1e-9
    max_steps: int = 2_000_000
    rtol: float = 1e-12
    atol: float = 1e-13
    initial_step: float | None = None
    max_step: float = math.pi / 8.0
    renormalize_det: bool = True
    verify_residual: bool = False


DEFAULT_OPTIONS = IntegratorOptions()


@dataclass(frozen=True)
class FundamentalTrajectory:
    """Fundamental matrix sampled along [0, pi] for one lambda."""

    lam: float
    z_nodes: np.ndarray
    matrices: np.ndarray  # shape (len(z_nodes), 2, 2)
    det_drift: float      # max |det - 1| over stored nodes
    step_det_drift: float  # max per-step |det - 1| before renormalization
    n_steps: int


@dataclass(frozen=True)
class Monodromy:
    """Period map A(lam) = Y(pi, lam) and its trace."""

    lam: float
    a: np.ndarray
    delta: float

    @property
    def y11(self):
        return float(self.a[0, 0])

    @property
    def y12(self):
        return float(self.a[1, 0])

    @property
    def y21(self):
        return float(self.a[0, 1])

    @property
    def y22(self):
        return float(self.a[1, 1])


@dataclass(frozen=True)
class FloquetPair:
    rho_plus: complex
    rho_minus: complex


@dataclass(frozen=True)
class DiscriminantDerivative:
    value: float              # variation-of-parameters integral formula
    finite_difference: float  # central-difference cross-check
    relative_error: float


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BOUNDARY = "boundary"


def _raise_for_status(status, lam):
    if status == _rk.STATUS_OK:
        return
    if status == _rk.STATUS_MAX_STEPS:
        raise StepSizeUnderflow(
            f"step budget exhausted integrating at lambda={lam}")
    if status == _rk.STATUS_SINGULAR:
        raise StepSizeUnderflow(
            f"fundamental matrix determinant became non-positive at lambda={lam}")
    raise StepSizeUnderflow(
        f"adaptive step control underflowed at lambda={lam}")


def _run_matrix(spec, lam, options, z_targets, mode):
    kinds, a0, ac, bc, samples, ns = spec.tables()
    h0 = options.initial_step
    if h0 is None:
        h0 = _rk.default_initial_step(lam)
    out, status, nsteps, drift = _rk._integrate(
        mode, kinds, a0, ac, bc, samples, ns, float(lam), 0.0,
        z_targets, options.rtol, options.atol, h0, options.max_step,
        options.max_steps, options.renormalize_det)
    _raise_for_status(status, lam)
    return out, nsteps, drift


def _unpack(row):
    return np.array([[row[0], row[2]], [row[1], row[3]]])


def integrate_fundamental(spec, lam, options=None, z_nodes=None):
    """Fundamental matrix trajectory with Y(0) = I.

    Parameters
    ----------
    z_nodes : optional array of output locations in [0, pi], increasing.
        Defaults to 65 uniform nodes.
    """
    options = options or DEFAULT_OPTIONS
    if z_nodes is None:
        z_nodes = np.linspace(0.0, PERIOD, 65)
    z_nodes = np.asarray(z_nodes, dtype=float)
    positive = z_nodes[z_nodes > 0.0]
    out, nsteps, drift = _run_matrix(spec, lam, options, positive,
                                     _rk.MODE_MATRIX)
    mats = np.empty((len(z_nodes), 2, 2))
    j = 0
    for i, z in enumerate(z_nodes):
        if z <= 0.0:
            mats[i] = np.eye(2)
        else:
            mats[i] = _unpack(out[j])
            j += 1
    dets = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    traj = FundamentalTrajectory(
        lam=float(lam), z_nodes=z_nodes, matrices=mats,
        det_drift=float(np.max(np.abs(dets - 1.0))),
        step_det_drift=float(drift), n_steps=int(nsteps))
    if options.verify_residual:
        res = residual_estimate(spec, lam, options)
        if res > options.residual_tol:
            raise StepSizeUnderflow(
                f"residual {res:.3e} exceeds tolerance {options.residual_tol:.3e}"
                f" at lambda={lam}")
    return traj


def monodromy(spec, lam, options=None):
    """Period map of the system at the given (real) spectral parameter."""
    options = options or DEFAULT_OPTIONS
    out, _, _ = _run_matrix(spec, lam, options, np.array([PERIOD]),
                            _rk.MODE_MATRIX)
    a = _unpack(out[0])
    return Monodromy(lam=float(lam), a=a, delta=float(a[0, 0] + a[1, 1]))


def discriminant(spec, lam, options=None):
    """Delta(lam) = trace of the period map; real for real lam."""
    return monodromy(spec, lam, options).delta


def floquet_multipliers(m):
    """Roots of rho^2 - Delta rho + 1 = 0.

    Accepts a Monodromy or a bare discriminant value.  For |Delta| <= 2
    the pair lies on the unit circle; otherwise rho_plus is the root of
    larger modulus and rho_minus = 1/rho_plus (computed without
    cancellation).
    """
    delta = m.delta if isinstance(m, Monodromy) else float(m)
    disc = delta * delta - 4.0
    if disc <= 0.0:
        root = complex(delta / 2.0, math.sqrt(-disc) / 2.0)
        return FloquetPair(rho_plus=root, rho_minus=root.conjugate())
    s = math.sqrt(disc)
    big = (delta + s) / 2.0 if delta >= 0 else (delta - s) / 2.0
    return FloquetPair(rho_plus=complex(big), rho_minus=complex(1.0 / big))


def classify_stability(delta, tol=1e-9):
    """Stable / unstable / boundary classification of a discriminant value."""
    if abs(abs(delta) - 2.0) <= tol:
        return Stability.BOUNDARY
    if abs(delta) < 2.0:
        return Stability.STABLE
    return Stability.UNSTABLE


def discriminant_derivative(spec, lam, options=None, quad="adaptive"):
    """d(Delta)/d(lambda) from the variation-of-parameters identity.

    The derivative equals

        y21 * int <Y1, Y1> + (y22 - y11) * int <Y1, Y2> - y12 * int <Y2, Y2>

    with the integrals over one period along the trajectory.  By default
    they ride along the adaptive integration as extra quadrature states
    (``quad="adaptive"``); ``quad="simpson"`` instead resamples the
    trajectory to a uniform grid (512 intervals, 1024 for |lam| > 50)
    and applies composite Simpson.  A central finite difference with
    step 1e-5 * max(1, |lam|) cross-checks the result.

    Raises
    ------
    DerivativeMismatch
        If formula and finite difference disagree by more than 1e-4
        relative (1e-8 absolute when both are below 1e-6 in magnitude).
    """
    options = options or DEFAULT_OPTIONS
    lam = float(lam)
    if quad == "adaptive":
        out, _, _ = _run_matrix(spec, lam, options, np.array([PERIOD]),
                                _rk.MODE_MATRIX_QUAD)
        y = out[0]
        i11, i12, i22 = y[4], y[5], y[6]
        value = y[2] * i11 + (y[3] - y[0]) * i12 - y[1] * i22
    elif quad == "simpson":
        n = 1024 if abs(lam) > 50.0 else 512
        zg = np.linspace(0.0, PERIOD, n + 1)
        traj = integrate_fundamental(spec, lam, options, z_nodes=zg)
        mats = traj.matrices
        c1 = mats[:, :, 0]
        c2 = mats[:, :, 1]
        i11 = _simpson(np.sum(c1 * c1, axis=1), zg)
        i12 = _simpson(np.sum(c1 * c2, axis=1), zg)
        i22 = _simpson(np.sum(c2 * c2, axis=1), zg)
        a = mats[-1]
        value = a[0, 1] * i11 + (a[1, 1] - a[0, 0]) * i12 - a[1, 0] * i22
    else:
        raise ValueError(f"unknown quadrature method {quad!r}")

    step = 1e-5 * max(1.0, abs(lam))
    tight = replace(options, rtol=min(options.rtol, 1e-12),
                    atol=min(options.atol, 1e-13))
    fd = (discriminant(spec, lam + step, tight)
          - discriminant(spec, lam - step, tight)) / (2.0 * step)

    scale = max(abs(value), abs(fd))
    rel = abs(value - fd) / scale if scale > 0 else 0.0
    if rel > 1e-4:
        if not (abs(value) < 1e-6 and abs(fd) < 1e-6
                and abs(value - fd) <= 1e-8):
            raise DerivativeMismatch(
                f"integral formula {value:.6e} vs finite difference {fd:.6e} "
                f"at lambda={lam} (relative error {rel:.3e})")
    return DiscriminantDerivative(value=float(value),
                                  finite_difference=float(fd),
                                  relative_error=float(rel))


def _simpson(vals, zg):
    n = len(zg) - 1
    h = (zg[-1] - zg[0]) / n
    return h / 3.0 * (vals[0] + vals[-1]
                      + 4.0 * np.sum(vals[1:-1:2]) + 2.0 * np.sum(vals[2:-1:2]))


def _frequency_scale(spec):
    """Crude bound on the z-frequency and size of the potential entries."""
    total = 0.0
    for f in (spec.q1, spec.q2, spec.q):
        if f.kind == "constant":
            total = max(total, abs(f.value))
        elif f.kind == "trigpoly":
            total = max(total, 2.0 * f.degree
                        + abs(f.a0) + sum(abs(c) for c in f.cos_coeffs)
                        + sum(abs(c) for c in f.sin_coeffs))
        else:
            total = max(total, len(f.samples) / 4.0
                        + max(abs(v) for v in f.samples))
    return total


def residual_estimate(spec, lam, options=None, max_nodes=200_000):
    """Independent defect estimate max_z |J Y' + (Q - lam I) Y|.

    Y is re-integrated onto a uniform grid fine enough for a five-point
    finite-difference derivative whose truncation error sits below the
    residual tolerance; the returned value is the largest entrywise
    defect over interior grid nodes.  Runs without determinant
    renormalization so differencing sees the raw flow.
    """
    options = options or DEFAULT_OPTIONS
    lam = float(lam)
    tol = options.residual_tol
    # five-point stencil truncation ~ h^4 |Y^(5)| / 30; the fifth
    # derivative grows like (solution rotation rate)^5, which combines
    # lambda with the potential's own frequency content and size.
    rate = 1.0 + abs(lam) + _frequency_scale(spec)
    h_target = (30.0 * tol * 0.1 / rate ** 5) ** 0.25
    n = int(min(max_nodes, max(512, math.ceil(PERIOD / h_target))))
    zg = np.linspace(0.0, PERIOD, n + 1)
    tight = replace(options, rtol=min(options.rtol, 1e-13),
                    atol=min(options.atol, 1e-14), renormalize_det=False,
                    verify_residual=False)
    traj = integrate_fundamental(spec, lam, tight, z_nodes=zg)
    mats = traj.matrices
    h = PERIOD / n
    deriv = (-mats[4:] + 8.0 * mats[3:-1] - 8.0 * mats[1:-3] + mats[:-4]) \
        / (12.0 * h)
    mid = mats[2:-2]
    zmid = zg[2:-2]
    q1 = spec.q1(zmid)
    q2 = spec.q2(zmid)
    qq = spec.q(zmid)
    qmats = np.empty((len(zmid), 2, 2))
    qmats[:, 0, 0] = q1 - lam
    qmats[:, 0, 1] = qq
    qmats[:, 1, 0] = qq
    qmats[:, 1, 1] = q2 - lam
    defect = np.einsum("ij,njk->nik", J, deriv) \
        + np.einsum("nij,njk->nik", qmats, mid)
    return float(np.max(np.abs(defect)))
