"""
Regularized incomplete gamma function.

Series expansion below ``x < a + 1`` and a modified Lentz continued fraction
above it, as in Numerical Recipes (2nd ed., section 6.2).  Both branches also
return the logarithm of the upper tail so that callers working far out in a
heavy tail never underflow.
"""

import math

EPS = 1e-16
TINY = 1e-300
MAX_ITER = 100_000


def _log_prefactor(a, x):
    # log(x^a e^-x / Gamma(a))
    return a * math.log(x) - x - math.lgamma(a)


def _lower_series(a, x):
    """Regularized lower gamma P(a, x) by its power series."""
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total * math.exp(_log_prefactor(a, x))
    raise ArithmeticError(f"incomplete gamma series did not converge for a={a}, x={x}")


def _log_upper_fraction(a, x):
    """log Q(a, x) by the continued fraction (modified Lentz)."""
    b = x + 1.0 - a
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < EPS:
            return _log_prefactor(a, x) + math.log(h)
    raise ArithmeticError(f"incomplete gamma fraction did not converge for a={a}, x={x}")


def log_gammaincc(a, x):
    """Natural log of the regularized upper incomplete gamma Q(a, x).

    Parameters
    ----------
    a : float
        Shape, strictly positive.
    x : float
        Lower integration limit, nonnegative.

    Returns
    -------
    float
        ``log Q(a, x)``; ``0.0`` at ``x == 0``.
    """
    if not a > 0.0:
        raise ValueError(f"shape must be positive, got {a}")
    if not x >= 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    if x < a + 1.0:
        return math.log1p(-_lower_series(a, x))
    return _log_upper_fraction(a, x)


def gammaincc(a, x):
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    return math.exp(log_gammaincc(a, x))


def gammainc(a, x):
    """Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x)."""
    if not a > 0.0:
        raise ValueError(f"shape must be positive, got {a}")
    if not x >= 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _lower_series(a, x)
    return -math.expm1(_log_upper_fraction(a, x))
