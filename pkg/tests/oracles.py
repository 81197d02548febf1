"""Independent reference computations used to derive frozen test values.

These deliberately avoid numpy and the package under test: arbitrary
precision (mpmath) or exact rational arithmetic (fractions) only.
"""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 50


def _mp(x):
    return mp.mpf(str(x))


def snr_smaller(ys):
    return -10 * mp.log10(sum(_mp(y) ** 2 for y in ys) / len(ys))


def snr_larger(ys):
    return -10 * mp.log10(sum(1 / _mp(y) ** 2 for y in ys) / len(ys))


def snr_nominal(ys, target):
    return -10 * mp.log10(sum((_mp(y) - _mp(target)) ** 2 for y in ys) / len(ys))


def minmax(col):
    lo, hi = min(col), max(col)
    return [(x - lo) / (hi - lo) for x in col]


def pop_std(ys):
    ys = [_mp(y) for y in ys]
    mean = sum(ys) / len(ys)
    return mp.sqrt(sum((y - mean) ** 2 for y in ys) / len(ys))


def quality_loss(ys, target):
    ys = [Fraction(str(y)) for y in ys]
    t = Fraction(str(target))
    n = len(ys)
    mean = sum(ys) / n
    return (
        sum((y - t) ** 2 for y in ys) / n,
        sum((y - mean) ** 2 for y in ys) / n,
        (mean - t) ** 2,
    )


def anova_ss(response, columns):
    """Exact sums of squares: total and one per level column (1-based levels)."""
    y = [Fraction(str(v)) for v in response]
    n = len(y)
    mu = sum(y) / n
    total = sum((v - mu) ** 2 for v in y)
    out = []
    for col in columns:
        ss = Fraction(0)
        for lev in sorted(set(col)):
            sel = [v for v, c in zip(y, col) if c == lev]
            ss += len(sel) * (sum(sel) / len(sel) - mu) ** 2
        out.append(ss)
    return total, out


def f_cdf(x, d1, d2):
    x = _mp(x)
    z = d1 * x / (d1 * x + d2)
    return mp.betainc(mp.mpf(d1) / 2, mp.mpf(d2) / 2, 0, z, regularized=True)


def cowper_symonds(sigma0, rate, C, P):
    return (1 + (_mp(rate) / _mp(C)) ** (1 / _mp(P))) * _mp(sigma0)


def surrogate(tp, tb, s, v, m, sigma0, C=40, P=5, rate=10, angle=20, w1=60000, w2=40500, scale=1190):
    vn = _mp(v) / mp.mpf(3.6) * mp.sin(mp.radians(_mp(angle)))
    sd = cowper_symonds(sigma0, rate, C, P)
    k = sd * (_mp(w1) * _mp(tp) ** 3 + _mp(w2) * _mp(tb) ** 3) / _mp(s)
    omega = mp.sqrt(k / _mp(m))
    return vn * omega / mp.mpf("9.81"), _mp(scale) * vn / omega
