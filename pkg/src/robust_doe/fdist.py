"""F-distribution CDF built on a continued-fraction incomplete beta."""

from __future__ import annotations

import math

from .errors import InvalidArgument

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 500


def _beta_cf(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise InvalidArgument("betainc needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise InvalidArgument(f"betainc needs 0 <= x <= 1, got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # the continued fraction converges fast only below the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def f_cdf(x: float, d1: float, d2: float) -> float:
    """P(F <= x) for an F(d1, d2) variable."""
    if d1 <= 0 or d2 <= 0:
        raise InvalidArgument("degrees of freedom must be positive")
    if x < 0 or math.isnan(x):
        raise InvalidArgument(f"f_cdf needs x >= 0, got {x}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    # 1 - I_{d2/(d2+d1 x)}(d2/2, d1/2) avoids cancellation for large x
    z = d1 * x / (d1 * x + d2)
    if z <= 0.5:
        return betainc_regularized(d1 / 2.0, d2 / 2.0, z)
    return 1.0 - betainc_regularized(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x))


def f_sf(x: float, d1: float, d2: float) -> float:
    """Upper tail P(F > x), i.e. the p-value of an observed F."""
    if d1 <= 0 or d2 <= 0:
        raise InvalidArgument("degrees of freedom must be positive")
    if x < 0 or math.isnan(x):
        raise InvalidArgument(f"f_sf needs x >= 0, got {x}")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    z = d1 * x / (d1 * x + d2)
    if z <= 0.5:
        return 1.0 - betainc_regularized(d1 / 2.0, d2 / 2.0, z)
    return betainc_regularized(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x))
