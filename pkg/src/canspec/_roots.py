"""Bracketed root finding for monotone characteristic functions."""

from .errors import BracketFailure

MAX_DOUBLINGS = 64


def expand_bracket(g, center, initial_radius=1.0):
    """Find [a, b] with g(a) <= 0 <= g(b) for increasing g, doubling the
    search radius outward from ``center``."""
    r = initial_radius
    a = center - r
    b = center + r
    ga = g(a)
    gb = g(b)
    doublings = 0
    while not (ga <= 0.0 <= gb):
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise BracketFailure(
                f"no sign change within 2^{MAX_DOUBLINGS} of {center}")
        r *= 2.0
        if ga > 0.0:
            a = center - r
            ga = g(a)
        if gb < 0.0:
            b = center + r
            gb = g(b)
    return a, b, ga, gb


def bisect_then_secant(g, a, b, ga, gb, bisect_width=1e-6,
                       residual_tol=1e-10, max_polish=60):
    """Root of increasing g on a sign-change bracket.

    Bisection narrows the bracket to ``bisect_width``, then secant steps
    (clamped to the bracket, falling back to bisection on stagnation)
    polish until |g| <= residual_tol.  Returns (root, |g(root)|).
    """
    if ga == 0.0:
        return a, 0.0
    if gb == 0.0:
        return b, 0.0
    while b - a > bisect_width:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            return mid, 0.0
        if gm < 0.0:
            a, ga = mid, gm
        else:
            b, gb = mid, gm

    x0, g0 = a, ga
    x1, g1 = b, gb
    best_x, best_g = (x0, abs(g0)) if abs(g0) < abs(g1) else (x1, abs(g1))
    for _ in range(max_polish):
        if best_g <= residual_tol:
            break
        denom = g1 - g0
        if denom != 0.0:
            x2 = x1 - g1 * (x1 - x0) / denom
        else:
            x2 = 0.5 * (a + b)
        if not (a <= x2 <= b):
            x2 = 0.5 * (a + b)
        g2 = g(x2)
        if abs(g2) < best_g:
            best_x, best_g = x2, abs(g2)
        if g2 < 0.0:
            a, ga = x2, g2
        elif g2 > 0.0:
            b, gb = x2, g2
        else:
            return x2, 0.0
        x0, g0 = x1, g1
        x1, g1 = x2, g2
        if abs(x1 - x0) < 1e-16 * max(1.0, abs(x1)):
            break
    return best_x, best_g
