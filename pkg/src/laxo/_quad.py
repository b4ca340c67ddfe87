"""One-dimensional quadrature helpers.

Adaptive Simpson for scalar integrands plus a fixed high-order Gauss rule
used for smooth short panels.
"""

import numpy as np

# 5-point Gauss-Legendre nodes/weights on [-1, 1].
_GL_X = np.array([
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640,
])
_GL_W = np.array([
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891,
])


def gauss5(f, a, b):
    """Fixed 5-point Gauss-Legendre integral of ``f`` over ``[a, b]``."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * np.sum(_GL_W * f(mid + half * _GL_X))


def _simpson(fa, fm, fb, h):
    return h * (fa + 4.0 * fm + fb) / 6.0


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=48):
    """Adaptive Simpson integral of the scalar callable ``f`` over ``[a, b]``.

    Absolute tolerance ``tol``; recursion hard-capped at ``max_depth``.
    """
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, b - a)
    return _adapt(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _adapt(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + _adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1))
