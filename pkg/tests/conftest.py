import math

import numpy as np
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from kninstanton.geometry import InstantonParams, eval_scalars

# derandomized so repeated runs exercise the same examples
settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("repo")


def finite(lo, hi):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


@st.composite
def params_st(draw, lam=(-1.5, 1.5)):
    M = draw(finite(0.1, 3.0))
    a = draw(finite(0.0, 3.0))
    e = draw(finite(0.0, 1.5))
    Lambda = draw(finite(*lam))
    p = InstantonParams(M, a, e, Lambda)
    # Xi = 0 makes the metric undefined
    if abs(p.Xi) <= 1e-3:
        p = InstantonParams(M, a, e, Lambda + 0.01)
    return p


@st.composite
def chart_point_st(draw, params):
    """(r, theta) with every chart quantity clear of zero."""
    r = draw(finite(-6.0, 6.0))
    theta = draw(finite(0.05, math.pi - 0.05))
    sc = eval_scalars(params, r, theta)
    scale = 1.0 + r * r + params.a**2
    if min(abs(sc.Sigma), abs(sc.Delta_theta)) < 1e-3 * scale or abs(sc.Delta_r) < 1e-3 * scale**2:
        assume(False)
    return r, theta


def rng(seed=0):
    return np.random.default_rng(seed)


def rel(x, y, scale=0.0):
    return abs(x - y) / max(abs(x), abs(y), scale, 1e-300)
