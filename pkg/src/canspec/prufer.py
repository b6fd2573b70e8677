"""Pruefer angle integration and Dirichlet-type eigenvalue location.

Writing a solution as (R cos theta, R sin theta), the angle satisfies
the scalar equation

    theta' = lam - q sin 2theta - q1 cos^2 theta - q2 sin^2 theta,
    theta(0) = gamma,

and theta(pi, lam, gamma) is continuous and strictly increasing in lam,
tending to +/-infinity with lam.  No modulo-pi reduction is ever
applied: the winding of the continuous branch is what makes eigenvalue
*indices* (not just locations) meaningful.

Two eigenvalue families are located by shooting on the endpoint angle:

* mu_n : theta(pi, mu_n, 0)    = n pi          (solution with second
  component vanishing at both endpoints);
* nu_n : theta(pi, nu_n, pi/2) = n pi + pi/2   (first component
  vanishing at both endpoints).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _rk
from ._roots import bisect_then_secant, expand_bracket
from .errors import CanspecError
from .monodromy import DEFAULT_OPTIONS, _raise_for_status
from .potential import PERIOD, shift


@dataclass(frozen=True)
class AngleSolution:
    lam: float
    gamma: float
    theta_end: float

    @property
    def winding_hint(self):
        return int(math.floor(self.theta_end / math.pi))


@dataclass(frozen=True)
class DirichletEigenvalue:
    index: int
    kind: str  # "mu" or "nu"
    value: float
    residual: float


def integrate_angle(spec, lam, gamma, options=None):
    """Endpoint angle theta(pi, lam, gamma) on the continuous branch."""
    if not 0.0 <= gamma < math.pi:
        raise ValueError("gamma must lie in [0, pi)")
    return AngleSolution(lam=float(lam), gamma=float(gamma),
                         theta_end=_theta_end(spec, lam, gamma, options))


def _theta_end(spec, lam, gamma, options=None):
    options = options or DEFAULT_OPTIONS
    kinds, a0, ac, bc, samples, ns = spec.tables()
    h0 = options.initial_step
    if h0 is None:
        h0 = _rk.default_initial_step(lam)
    out, status, _, _ = _rk._integrate(
        _rk.MODE_ANGLE, kinds, a0, ac, bc, samples, ns, float(lam),
        float(gamma), np.array([PERIOD]), options.rtol, options.atol,
        h0, options.max_step, options.max_steps, False)
    _raise_for_status(status, lam)
    return float(out[0, 0])


def _locate(spec, n, gamma, target, kind, options):
    def g(lam):
        return _theta_end(spec, lam, gamma, options) - target

    a, b, ga, gb = expand_bracket(g, float(n))
    root, residual = bisect_then_secant(g, a, b, ga, gb)
    return DirichletEigenvalue(index=int(n), kind=kind, value=root,
                               residual=residual)


def find_mu(spec, n, options=None):
    """Eigenvalue mu_n: unique lam with theta(pi, lam, 0) = n pi."""
    return _locate(spec, n, 0.0, n * math.pi, "mu", options)


def find_nu(spec, n, options=None):
    """Eigenvalue nu_n: unique lam with theta(pi, lam, pi/2) = n pi + pi/2."""
    return _locate(spec, n, math.pi / 2.0, n * math.pi + math.pi / 2.0,
                   "nu", options)


def shifted_mu_curve(spec, n, tau_grid, options=None):
    """mu_n as a function of the potential shift tau.

    Each tau gets its own eigenvalue solve on the shifted potential.
    Adjacent values are screened against jumps larger than ten times the
    local grid spacing times an empirical slope bound (the curve is
    continuous in tau), which would indicate an indexing slip.
    """
    taus = [float(t) for t in tau_grid]
    values = [find_mu(shift(spec, t), n, options).value for t in taus]
    if len(taus) >= 3:
        dts = np.diff(taus)
        jumps = np.abs(np.diff(values))
        with np.errstate(divide="ignore", invalid="ignore"):
            slopes = np.where(dts > 0, jumps / dts, 0.0)
        bound = max(1.0, float(np.median(slopes)) * 10.0)
        bad = jumps > 10.0 * bound * np.maximum(dts, 1e-12)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise CanspecError(
                f"shifted eigenvalue curve jumps by {jumps[i]:.3e} between "
                f"tau={taus[i]:.6f} and tau={taus[i + 1]:.6f}")
    return list(zip(taus, values))
