"""Adaptive Runge-Kutta core shared by the matrix and angle integrators.

The canonical system J Y' + Q Y = lam Y is integrated in explicit form
Y' = -J (lam I - Q) Y.  One Dormand-Prince 5(4) stepper serves three
right-hand sides, selected by ``mode``:

* ``MODE_MATRIX``      -- 4 states, the two columns of the fundamental matrix;
* ``MODE_MATRIX_QUAD`` -- 7 states, fundamental matrix plus the running
  L2 pairings of its columns (used by the discriminant derivative);
* ``MODE_ANGLE``       -- 1 state, the polar (Pruefer) angle of a solution.

State packing for the matrix modes: ``y[0], y[1]`` is the solution with
initial value (1, 0) and ``y[2], y[3]`` the one with initial value (0, 1),
i.e. the fundamental matrix is ``[[y0, y2], [y1, y3]]``.  The Wronskian
``y0*y3 - y2*y1`` equals 1 exactly for the true flow; each accepted step
divides the matrix states by its square root.

Potentials enter as packed coefficient tables (see ``potential.py``) so
the kernels stay jit-compilable.  If numba is unavailable the same code
runs interpreted.
"""

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


MODE_MATRIX = 0
MODE_MATRIX_QUAD = 1
MODE_ANGLE = 2

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_SINGULAR = 3

KIND_TRIG = 0
KIND_SAMPLES = 1

_PI = math.pi


@njit(cache=True, nogil=True)
def _pot_eval(kinds, a0, ac, bc, samples, ns, z):
    """Evaluate (q1, q2, q) at z, reducing z modulo pi."""
    zz = z % _PI
    m = ac.shape[1]
    c1 = math.cos(2.0 * zz)
    s1 = math.sin(2.0 * zz)
    out0 = 0.0
    out1 = 0.0
    out2 = 0.0
    for i in range(3):
        if kinds[i] == KIND_SAMPLES:
            n = ns[i]
            x = zz * n / _PI
            j = int(x)
            if j >= n:
                j = n - 1
            frac = x - j
            j2 = j + 1
            if j2 >= n:
                j2 = 0
            val = samples[i, j] * (1.0 - frac) + samples[i, j2] * frac
        else:
            val = a0[i]
            ck = c1
            sk = s1
            for k in range(m):
                val += ac[i, k] * ck + bc[i, k] * sk
                ck2 = ck * c1 - sk * s1
                sk = sk * c1 + ck * s1
                ck = ck2
        if i == 0:
            out0 = val
        elif i == 1:
            out1 = val
        else:
            out2 = val
    return out0, out1, out2


@njit(cache=True, nogil=True)
def _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z, y, dy):
    q1v, q2v, qv = _pot_eval(kinds, a0, ac, bc, samples, ns, z)
    if mode == MODE_ANGLE:
        th2 = 2.0 * y[0]
        dy[0] = (lam - 0.5 * (q1v + q2v)
                 - qv * math.sin(th2)
                 - 0.5 * (q1v - q2v) * math.cos(th2))
        return
    dy[0] = qv * y[0] - (lam - q2v) * y[1]
    dy[1] = (lam - q1v) * y[0] - qv * y[1]
    dy[2] = qv * y[2] - (lam - q2v) * y[3]
    dy[3] = (lam - q1v) * y[2] - qv * y[3]
    if mode == MODE_MATRIX_QUAD:
        dy[4] = y[0] * y[0] + y[1] * y[1]
        dy[5] = y[0] * y[2] + y[1] * y[3]
        dy[6] = y[2] * y[2] + y[3] * y[3]


@njit(cache=True, nogil=True)
def _integrate(mode, kinds, a0, ac, bc, samples, ns, lam, gamma, z_out,
               rtol, atol, h0, hmax, max_steps, renorm):
    """Integrate from z = 0, recording the state at each node of z_out.

    z_out must be strictly increasing and positive.  Returns
    (out, status, nsteps, det_drift) where out[i] holds the 7-slot state
    at z_out[i] and det_drift is the largest per-step |det - 1| observed
    before renormalization.
    """
    nstate = 1 if mode == MODE_ANGLE else (7 if mode == MODE_MATRIX_QUAD else 4)
    nout = z_out.shape[0]
    out = np.zeros((nout, 7))

    y = np.zeros(7)
    ynew = np.zeros(7)
    ystage = np.zeros(7)
    k1 = np.zeros(7)
    k2 = np.zeros(7)
    k3 = np.zeros(7)
    k4 = np.zeros(7)
    k5 = np.zeros(7)
    k6 = np.zeros(7)
    k7 = np.zeros(7)

    if mode == MODE_ANGLE:
        y[0] = gamma
    else:
        y[0] = 1.0
        y[3] = 1.0

    z = 0.0
    h = h0
    if h > hmax:
        h = hmax
    iout = 0
    nsteps = 0
    det_drift = 0.0
    status = STATUS_OK

    _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z, y, k1)

    while iout < nout:
        target = z_out[iout]
        if target - z <= 1e-14 * (1.0 + abs(target)):
            for i in range(nstate):
                out[iout, i] = y[i]
            iout += 1
            continue
        if nsteps >= max_steps:
            status = STATUS_MAX_STEPS
            break

        h_try = h
        if h_try > hmax:
            h_try = hmax
        landing = False
        if z + h_try >= target:
            h_try = target - z
            landing = True

        # Dormand-Prince 5(4) stages; k1 carried over (FSAL).
        for i in range(nstate):
            ystage[i] = y[i] + h_try * (0.2 * k1[i])
        _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z + 0.2 * h_try,
             ystage, k2)
        for i in range(nstate):
            ystage[i] = y[i] + h_try * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i])
        _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z + 0.3 * h_try,
             ystage, k3)
        for i in range(nstate):
            ystage[i] = y[i] + h_try * (44.0 / 45.0 * k1[i]
                                        - 56.0 / 15.0 * k2[i]
                                        + 32.0 / 9.0 * k3[i])
        _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z + 0.8 * h_try,
             ystage, k4)
        for i in range(nstate):
            ystage[i] = y[i] + h_try * (19372.0 / 6561.0 * k1[i]
                                        - 25360.0 / 2187.0 * k2[i]
                                        + 64448.0 / 6561.0 * k3[i]
                                        - 212.0 / 729.0 * k4[i])
        _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z + 8.0 / 9.0 * h_try,
             ystage, k5)
        for i in range(nstate):
            ystage[i] = y[i] + h_try * (9017.0 / 3168.0 * k1[i]
                                        - 355.0 / 33.0 * k2[i]
                                        + 46732.0 / 5247.0 * k3[i]
                                        + 49.0 / 176.0 * k4[i]
                                        - 5103.0 / 18656.0 * k5[i])
        _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z + h_try, ystage, k6)
        for i in range(nstate):
            ynew[i] = y[i] + h_try * (35.0 / 384.0 * k1[i]
                                      + 500.0 / 1113.0 * k3[i]
                                      + 125.0 / 192.0 * k4[i]
                                      - 2187.0 / 6784.0 * k5[i]
                                      + 11.0 / 84.0 * k6[i])
        _rhs(mode, kinds, a0, ac, bc, samples, ns, lam, z + h_try, ynew, k7)
        nsteps += 1

        errnorm = 0.0
        for i in range(nstate):
            err = h_try * (71.0 / 57600.0 * k1[i]
                           - 71.0 / 16695.0 * k3[i]
                           + 71.0 / 1920.0 * k4[i]
                           - 17253.0 / 339200.0 * k5[i]
                           + 22.0 / 525.0 * k6[i]
                           - 1.0 / 40.0 * k7[i])
            ymag = abs(y[i])
            if abs(ynew[i]) > ymag:
                ymag = abs(ynew[i])
            sc = atol + rtol * ymag
            e = abs(err) / sc
            if e > errnorm:
                errnorm = e

        if errnorm <= 1.0:
            # accept
            z = target if landing else z + h_try
            for i in range(nstate):
                y[i] = ynew[i]
                k1[i] = k7[i]
            if mode != MODE_ANGLE and renorm:
                det = y[0] * y[3] - y[2] * y[1]
                if det <= 0.0:
                    status = STATUS_SINGULAR
                    break
                drift = abs(det - 1.0)
                if drift > det_drift:
                    det_drift = drift
                fac = 1.0 / math.sqrt(det)
                for i in range(4):
                    y[i] *= fac
                    k1[i] *= fac
                if mode == MODE_MATRIX_QUAD:
                    fac2 = fac * fac
                    for i in range(4, 7):
                        k1[i] *= fac2
            if landing:
                for i in range(nstate):
                    out[iout, i] = y[i]
                iout += 1
            if errnorm == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * errnorm ** -0.2
                if fac > 5.0:
                    fac = 5.0
                elif fac < 0.2:
                    fac = 0.2
            h = h_try * fac
        else:
            fac = 0.9 * errnorm ** -0.2
            if fac < 0.2:
                fac = 0.2
            h = h_try * fac
            if h < 1e-14 * (1.0 + abs(z)):
                status = STATUS_STEP_UNDERFLOW
                break

    return out, status, nsteps, det_drift


def default_initial_step(lam):
    """Oscillation-aware first step: the solution rotates at rate ~|lam|."""
    return min(_PI / 64.0, 1.0 / (4.0 * (1.0 + abs(lam))))
