"""Real symmetric pi-periodic 2x2 matrix potentials and their transforms.

A potential Q(z) = [[q1, q], [q, q2]] is described by three scalar
functions.  Three representations are supported:

* ``constant`` -- a fixed value;
* ``trigpoly`` -- a0 + sum_k (a_k cos 2kz + b_k sin 2kz), exact arithmetic
  on coefficients wherever possible;
* ``samples``  -- uniform samples on [0, pi) with linear interpolation.

Constant and trig-polynomial entries are absolutely continuous by
construction; sampled entries are an interpolation surrogate and are
rejected by every operation that needs the derivative of the potential.
The period is fixed at pi throughout; rescaling other periods is the
caller's job.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ACRequired, NotCanonicalForm

PERIOD = math.pi

# Pointwise predicates are checked on this many equispaced points of
# [0, pi); trig-poly degrees in practice stay far below half of it.
CHECK_GRID_SIZE = 64

_FIT_GRID = 1024
_FIT_TAIL = 1e-14
_FIT_MAX_DEGREE = 256


def check_grid(n=CHECK_GRID_SIZE):
    return np.arange(n) * (PERIOD / n)


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    """One pi-periodic real scalar entry of a potential."""

    kind: str
    value: float = 0.0
    a0: float = 0.0
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()
    samples: tuple = ()

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(value):
        return ScalarFunction(kind="constant", value=float(value))

    @staticmethod
    def trigpoly(a0=0.0, cos_coeffs=(), sin_coeffs=()):
        cos_c = tuple(float(c) for c in cos_coeffs)
        sin_c = tuple(float(c) for c in sin_coeffs)
        m = max(len(cos_c), len(sin_c))
        cos_c += (0.0,) * (m - len(cos_c))
        sin_c += (0.0,) * (m - len(sin_c))
        while m and cos_c[m - 1] == 0.0 and sin_c[m - 1] == 0.0:
            m -= 1
        return ScalarFunction(kind="trigpoly", a0=float(a0),
                              cos_coeffs=cos_c[:m], sin_coeffs=sin_c[:m])

    @staticmethod
    def sampled(values):
        vals = tuple(float(v) for v in values)
        if len(vals) < 2:
            raise ValueError("sampled representation needs at least 2 points")
        return ScalarFunction(kind="samples", samples=vals)

    @staticmethod
    def fit_trigpoly(func, max_degree=_FIT_MAX_DEGREE, grid=_FIT_GRID):
        """Project a smooth pi-periodic callable onto a trig polynomial.

        Uses an FFT on a uniform grid; coefficients below the tail
        threshold are dropped.  Exact (to roundoff) for inputs that are
        genuine trig polynomials of degree < grid/2.
        """
        z = np.arange(grid) * (PERIOD / grid)
        vals = np.asarray(func(z), dtype=float)
        spec = np.fft.rfft(vals) / grid
        a0 = spec[0].real
        kmax = min(max_degree, grid // 2 - 1)
        a = 2.0 * spec[1:kmax + 1].real
        b = -2.0 * spec[1:kmax + 1].imag
        keep = kmax
        while keep and abs(a[keep - 1]) < _FIT_TAIL and abs(b[keep - 1]) < _FIT_TAIL:
            keep -= 1
        return ScalarFunction.trigpoly(a0, a[:keep], b[:keep])

    # -- basic queries -------------------------------------------------

    @property
    def is_ac(self):
        """Absolutely continuous by construction (derivative available)."""
        return self.kind != "samples"

    @property
    def degree(self):
        return len(self.cos_coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        zz = np.mod(z, PERIOD)
        if self.kind == "constant":
            out = np.full_like(zz, self.value)
        elif self.kind == "trigpoly":
            out = np.full_like(zz, self.a0)
            for k in range(self.degree):
                out += (self.cos_coeffs[k] * np.cos(2 * (k + 1) * zz)
                        + self.sin_coeffs[k] * np.sin(2 * (k + 1) * zz))
        else:
            vals = np.asarray(self.samples)
            n = len(vals)
            x = zz * (n / PERIOD)
            j = np.minimum(x.astype(int), n - 1)
            frac = x - j
            out = vals[j] * (1.0 - frac) + vals[(j + 1) % n] * frac
        return out if out.ndim else float(out)

    def mean(self):
        """Average over one period, (1/pi) * integral over [0, pi]."""
        if self.kind == "constant":
            return self.value
        if self.kind == "trigpoly":
            return self.a0
        return float(np.mean(self.samples))

    # -- calculus ------------------------------------------------------

    def derivative(self):
        if self.kind == "constant":
            return ScalarFunction.constant(0.0)
        if self.kind == "trigpoly":
            cos_c = [2 * (k + 1) * self.sin_coeffs[k] for k in range(self.degree)]
            sin_c = [-2 * (k + 1) * self.cos_coeffs[k] for k in range(self.degree)]
            return ScalarFunction.trigpoly(0.0, cos_c, sin_c)
        raise ACRequired("sampled entries carry no derivative")

    def antiderivative_at(self, z):
        """F(z) = integral of this function over [0, z] (closed form for
        constant/trig-poly, cumulative trapezoid for samples)."""
        z = np.asarray(z, dtype=float)
        if self.kind == "constant":
            out = self.value * z
        elif self.kind == "trigpoly":
            out = self.a0 * z
            for k in range(self.degree):
                w = 2 * (k + 1)
                out = out + (self.cos_coeffs[k] * np.sin(w * z) / w
                             - self.sin_coeffs[k] * (np.cos(w * z) - 1.0) / w)
        else:
            # dense trapezoid table, periodic extension handled via mean
            n = max(1024, 4 * len(self.samples))
            zg = np.linspace(0.0, PERIOD, n + 1)
            vals = self.__call__(zg)
            table = np.concatenate(([0.0], np.cumsum(
                0.5 * (vals[1:] + vals[:-1]) * (PERIOD / n))))
            total = table[-1]
            periods = np.floor(z / PERIOD)
            rem = z - periods * PERIOD
            out = periods * total + np.interp(rem, zg, table)
        return out if out.ndim else float(out)

    def shift(self, tau):
        """Return the function z -> f(z + tau), representation preserved."""
        if self.kind == "constant":
            return self
        if self.kind == "trigpoly":
            cos_c = []
            sin_c = []
            for k in range(self.degree):
                w = 2 * (k + 1) * tau
                c, s = math.cos(w), math.sin(w)
                cos_c.append(self.cos_coeffs[k] * c + self.sin_coeffs[k] * s)
                sin_c.append(-self.cos_coeffs[k] * s + self.sin_coeffs[k] * c)
            return ScalarFunction.trigpoly(self.a0, cos_c, sin_c)
        n = len(self.samples)
        zg = np.arange(n) * (PERIOD / n)
        return ScalarFunction.sampled(self.__call__(zg + tau))

    # -- algebra ------------------------------------------------------

    def _binary(self, other, op):
        if isinstance(other, (int, float)):
            other = ScalarFunction.constant(other)
        a, b = self, other
        if a.kind == "constant" and b.kind == "constant":
            return ScalarFunction.constant(op(a.value, b.value))
        if a.kind != "samples" and b.kind != "samples":
            ca0, ca, cb = _as_trig(a)
            da0, da, db = _as_trig(b)
            m = max(len(ca), len(da))
            ca = np.concatenate([ca, np.zeros(m - len(ca))])
            cb = np.concatenate([cb, np.zeros(m - len(cb))])
            da = np.concatenate([da, np.zeros(m - len(da))])
            db = np.concatenate([db, np.zeros(m - len(db))])
            return ScalarFunction.trigpoly(op(ca0, da0), op(ca, da), op(cb, db))
        n = max(len(a.samples) if a.kind == "samples" else 0,
                len(b.samples) if b.kind == "samples" else 0, 1024)
        zg = np.arange(n) * (PERIOD / n)
        return ScalarFunction.sampled(op(a(zg), b(zg)))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            if self.kind == "constant":
                return ScalarFunction.constant(self.value * other)
            if self.kind == "trigpoly":
                return ScalarFunction.trigpoly(
                    self.a0 * other,
                    [c * other for c in self.cos_coeffs],
                    [c * other for c in self.sin_coeffs])
            return ScalarFunction.sampled(np.asarray(self.samples) * other)
        if isinstance(other, ScalarFunction):
            if self.kind != "samples" and other.kind != "samples":
                deg = self.degree + other.degree
                grid = max(_FIT_GRID, 8 * (deg + 1))
                return ScalarFunction.fit_trigpoly(
                    lambda zz: self(zz) * other(zz),
                    max_degree=deg, grid=grid)
            return self._binary(other, lambda x, y: x * y)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    # -- serialization -------------------------------------------------

    def to_dict(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        if self.kind == "trigpoly":
            return {"kind": "trigpoly", "a0": self.a0,
                    "cos": list(self.cos_coeffs), "sin": list(self.sin_coeffs)}
        return {"kind": "samples", "values": list(self.samples)}

    @staticmethod
    def from_dict(d):
        kind = d["kind"]
        if kind == "constant":
            return ScalarFunction.constant(d["value"])
        if kind == "trigpoly":
            return ScalarFunction.trigpoly(d.get("a0", 0.0),
                                           d.get("cos", ()), d.get("sin", ()))
        if kind == "samples":
            return ScalarFunction.sampled(d["values"])
        raise ValueError(f"unknown scalar function kind: {kind!r}")


def _as_trig(f):
    if f.kind == "constant":
        return f.value, np.zeros(0), np.zeros(0)
    return f.a0, np.asarray(f.cos_coeffs), np.asarray(f.sin_coeffs)


ZERO = ScalarFunction.constant(0.0)


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """Symmetric pi-periodic matrix potential [[q1, q], [q, q2]]."""

    q1: ScalarFunction
    q2: ScalarFunction
    q: ScalarFunction
    _cache: dict = field(default_factory=dict, repr=False)

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero():
        return PotentialSpec(ZERO, ZERO, ZERO)

    @staticmethod
    def constant(q1, q2, q):
        return PotentialSpec(ScalarFunction.constant(q1),
                             ScalarFunction.constant(q2),
                             ScalarFunction.constant(q))

    @staticmethod
    def from_matrix(mat):
        mat = np.asarray(mat, dtype=float)
        if mat.shape != (2, 2) or abs(mat[0, 1] - mat[1, 0]) > 0.0:
            raise ValueError("constant potential must be a symmetric 2x2 matrix")
        return PotentialSpec.constant(mat[0, 0], mat[1, 1], mat[0, 1])

    @staticmethod
    def scalar_identity(p):
        if isinstance(p, (int, float)):
            p = ScalarFunction.constant(p)
        return PotentialSpec(p, p, ZERO)

    @staticmethod
    def canonical(q1, q_off):
        """Traceless potential [[q1, q], [q, -q1]]."""
        return PotentialSpec(q1, -q1, q_off)

    # -- cached structural tags ----------------------------------------

    def _tag(self, name, fn):
        if name not in self._cache:
            self._cache[name] = fn()
        return self._cache[name]

    @property
    def is_constant(self):
        return self._tag("is_constant", lambda: all(
            f.kind == "constant" for f in (self.q1, self.q2, self.q)))

    @property
    def is_scalar_identity(self):
        return self._tag("is_scalar_identity",
                         lambda: is_scalar_identity(self, 1e-9))

    @property
    def is_canonical_form(self):
        return self._tag("is_canonical_form",
                         lambda: is_canonical_form(self, 1e-10))

    @property
    def is_ac(self):
        return self.q1.is_ac and self.q2.is_ac and self.q.is_ac

    def tables(self):
        """Packed coefficient arrays consumed by the integration kernels."""
        if "tables" not in self._cache:
            funcs = (self.q1, self.q2, self.q)
            from ._rk import KIND_SAMPLES, KIND_TRIG

            kinds = np.zeros(3, dtype=np.int64)
            a0 = np.zeros(3)
            m = max(f.degree if f.kind == "trigpoly" else 0 for f in funcs)
            ac = np.zeros((3, m))
            bc = np.zeros((3, m))
            smax = max((len(f.samples) for f in funcs if f.kind == "samples"),
                       default=1)
            samples = np.zeros((3, smax))
            ns = np.ones(3, dtype=np.int64)
            for i, f in enumerate(funcs):
                if f.kind == "samples":
                    kinds[i] = KIND_SAMPLES
                    ns[i] = len(f.samples)
                    samples[i, :ns[i]] = f.samples
                else:
                    kinds[i] = KIND_TRIG
                    a0[i] = f.value if f.kind == "constant" else f.a0
                    for k in range(f.degree):
                        ac[i, k] = f.cos_coeffs[k]
                        bc[i, k] = f.sin_coeffs[k]
            self._cache["tables"] = (kinds, a0, ac, bc, samples, ns)
        return self._cache["tables"]

    # -- serialization -------------------------------------------------

    def to_dict(self):
        return {"q1": self.q1.to_dict(), "q2": self.q2.to_dict(),
                "q": self.q.to_dict()}

    @staticmethod
    def from_dict(d):
        return PotentialSpec(ScalarFunction.from_dict(d["q1"]),
                             ScalarFunction.from_dict(d["q2"]),
                             ScalarFunction.from_dict(d["q"]))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    @staticmethod
    def load(path):
        with open(path) as fh:
            return PotentialSpec.from_dict(json.load(fh))


def evaluate(spec, z):
    """Q(z) as an exactly symmetric 2x2 array (z reduced mod pi)."""
    off = spec.q(z)
    return np.array([[spec.q1(z), off], [off, spec.q2(z)]], dtype=float)


def shift(spec, tau):
    """Potential z -> Q(z + tau); representation preserving."""
    return PotentialSpec(spec.q1.shift(tau), spec.q2.shift(tau),
                         spec.q.shift(tau))


def is_scalar_identity(spec, tol):
    """True iff Q = p*I within tol on the check grid (zero off-diagonal
    and equal diagonal entries)."""
    zg = check_grid()
    dev = max(np.max(np.abs(spec.q(zg))),
              np.max(np.abs(spec.q1(zg) - spec.q2(zg))))
    return bool(dev <= tol)


def is_canonical_form(spec, tol=1e-10):
    """True iff the diagonal entries satisfy q2 = -q1 within tol (the
    traceless shape that anticommutes with the symplectic matrix J)."""
    zg = check_grid()
    return bool(np.max(np.abs(spec.q1(zg) + spec.q2(zg))) <= tol)


def gauge_rotate(spec, omega):
    """Rotate a canonical-form potential by the constant gauge angle omega.

    Returns the potential obtained from the unitary change of dependent
    variable Y -> e^{J omega} Y, which multiplies Q on the left by
    e^{2 J omega}; the result stays symmetric and traceless.  Periodic
    and anti-periodic spectra are unchanged by this transform.
    """
    if not spec.is_canonical_form:
        raise NotCanonicalForm("gauge rotation requires a traceless potential")
    c = math.cos(2.0 * omega)
    s = math.sin(2.0 * omega)
    new_q1 = spec.q1 * c + spec.q * s
    new_q = spec.q * c - spec.q1 * s
    return PotentialSpec(new_q1, -new_q1, new_q)


@dataclass(frozen=True)
class TraceSplit:
    """Result of splitting Q into p*I plus a gauge-conjugated traceless part."""

    p: ScalarFunction
    tilde: PotentialSpec
    shift_constant: float
    h: ScalarFunction


def trace_split(spec):
    """Split Q(z) = p(z) I + e^{J h(z)} Q~(z) e^{-J h(z)} with Q~ traceless.

    p is half the trace; h(z) = P(z) - z * mean(p) with P the
    antiderivative of p, so h(0) = h(pi) = 0 and the transform preserves
    periodic/anti-periodic boundary conditions.  Eigenvalues of the
    transformed problem are shifted by ``shift_constant`` = mean(p).
    """
    if not spec.is_ac:
        raise ACRequired("trace splitting requires absolutely continuous entries")
    p = (spec.q1 + spec.q2) * 0.5
    d = (spec.q1 - spec.q2) * 0.5
    c = p.mean()

    if p.kind == "constant" or p.degree == 0:
        h = ZERO
        tilde = PotentialSpec(d, -d, spec.q)
        return TraceSplit(p=p, tilde=tilde, shift_constant=c, h=h)

    # h is itself a trig polynomial: integrate p term by term and drop
    # the linear part.
    cos_c = [-p.sin_coeffs[k] / (2 * (k + 1)) for k in range(p.degree)]
    sin_c = [p.cos_coeffs[k] / (2 * (k + 1)) for k in range(p.degree)]
    h0 = -sum(cos_c)  # enforces h(0) = 0
    h = ScalarFunction.trigpoly(h0, cos_c, sin_c)

    # Conjugating a traceless symmetric matrix by e^{J h} rotates the
    # (diagonal, off-diagonal) pair by the angle 2h.
    def d_tilde(zz):
        return d(zz) * np.cos(2 * h(zz)) - spec.q(zz) * np.sin(2 * h(zz))

    def q_tilde(zz):
        return d(zz) * np.sin(2 * h(zz)) + spec.q(zz) * np.cos(2 * h(zz))

    dt = ScalarFunction.fit_trigpoly(d_tilde)
    qt = ScalarFunction.fit_trigpoly(q_tilde)
    tilde = PotentialSpec(dt, -dt, qt)
    return TraceSplit(p=p, tilde=tilde, shift_constant=c, h=h)
