"""Small numerical helpers used across modules."""

import math

TINY = 1e-300


def rel_diff(x, y, scale=0.0):
    """Relative discrepancy of ``x`` and ``y``.

    ``scale`` is the magnitude of the largest term that entered either
    computation; passing it keeps cancellation in a sum from being counted
    as error.
    """
    denom = max(abs(x), abs(y), abs(scale), TINY)
    return abs(x - y) / denom


def sign(x):
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def bisect_root(f, lo, hi, f_lo=None, xtol=1e-12, maxiter=200):
    """Bisection for a sign change of ``f`` on ``[lo, hi]``.

    The bracket is assumed valid; the midpoint of the final bracket is
    returned.
    """
    if f_lo is None:
        f_lo = f(lo)
    for _ in range(maxiter):
        if abs(hi - lo) <= xtol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def isclose_rel(x, y, rtol, scale=0.0):
    return rel_diff(x, y, scale) <= rtol


def finite(*xs):
    return all(math.isfinite(x) for x in xs)
