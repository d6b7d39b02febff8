import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import finite
from kninstanton.geometry import InstantonParams, eval_scalars
from kninstanton.horizons import block_chart
from kninstanton.integrals import MotionConstants, TangentState, colat_Theta, constants_from_state
from kninstanton.dynamics import (
    EQ_STABLE,
    FULL_RANGE,
    OFF_EQ_STABLE,
    SYMMETRIC,
    WELL,
    MotionConstantsLite,
    allowed_intervals,
    chi,
    classify_motion,
    default_domains,
    equilibria,
    kinetic_T,
    lazy_extra_roots,
    lazy_rates,
    lazy_signs,
    lazy_table,
    potential_V,
    potential_derivative,
    potential_profile,
    psi_chi,
    psi_cone_census,
    root_condition,
)

ADS = InstantonParams(1, 0.3, 0.2, -0.3)


def consts_st(params):
    return st.builds(
        lambda q, E, Lz, Q: MotionConstants.from_EL_Q(params, q, E, Lz, Q),
        finite(-2, 2), finite(-2, 2), finite(-2, 2), finite(-2, 2),
    )


@given(consts_st(ADS))
def test_V_equator_zero(c):
    # cos(pi/2) is 6e-17, so V is C^2 times a bounded factor
    assert abs(potential_V(ADS, c, math.pi / 2)) < 1e-30
    assert abs(potential_derivative(ADS, c, math.pi / 2)) < 1e-14


def test_V_pole_limit_lz_zero():
    c = MotionConstants.from_EL_Q(ADS, 1.3, 0.4, 0.0, 0.0)
    want = ADS.a**2 * (1.3 - ADS.Xi**2 * 0.16)
    assert potential_V(ADS, c, 0.0) == pytest.approx(want, rel=1e-14)
    assert potential_V(ADS, c, math.pi) == pytest.approx(want, rel=1e-14)


@given(finite(-6, 6), finite(0.05, math.pi - 0.05), st.lists(finite(-1, 1), min_size=4, max_size=4), finite(-1, 1))
def test_Q_is_T_plus_V(r, th, v, q):
    sc = eval_scalars(ADS, r, th)
    assume(abs(sc.Sigma) > 1e-2 and abs(sc.Delta_r) > 1e-2)
    s = TangentState(r, th, 0, 0, *v)
    c = constants_from_state(ADS, q, s)
    T = kinetic_T(ADS, c, th, s.vtheta, r)
    V = potential_V(ADS, c, th)
    scale = abs(T) + abs(V) + abs(c.K) + ADS.Xi**2 * (c.Lz - ADS.a * c.E) ** 2
    assert abs(c.Q - (T + V)) <= 1e-10 * scale


@given(consts_st(ADS), finite(0.1, math.pi - 0.1))
def test_dV_finite_difference(c, th):
    h = 1e-5
    fd = (potential_V(ADS, c, th + h) - potential_V(ADS, c, th - h)) / (2 * h)
    dv = potential_derivative(ADS, c, th)
    # central difference error h^2 V'''/6 is well inside 1e-6 at this range
    scale = max(abs(dv), abs(potential_V(ADS, c, th)), 1e-8)
    assert abs(fd - dv) <= 1e-6 * scale


def test_dV_pole_limits():
    c = MotionConstants.from_EL_Q(ADS, 1.0, 0.2, 0.3, 0.0)
    vals = [potential_derivative(ADS, c, th) for th in (1e-2, 1e-4)]
    assert vals[0] < 0 and vals[1] < vals[0] * 1e5
    vals = [potential_derivative(ADS, c, math.pi - th) for th in (1e-2, 1e-4)]
    assert vals[0] > 0 and vals[1] > vals[0] * 1e5


@given(finite(-2, 2), finite(-2, 2), finite(0.05, 3), finite(-1.5, -1e-3))
def test_chi_nonpositive_ads(E, Lz, a, lam):
    p = InstantonParams(1, a, 0, lam)
    x = chi(p, MotionConstantsLite(E, Lz))
    assert x <= 0.0


def test_chi_zero_only_at_origin():
    p = InstantonParams(1, 0.3, 0, -0.3)
    assert chi(p, MotionConstantsLite(0.0, 0.0)) == 0.0
    assert chi(p, MotionConstantsLite(0.0, 0.1)) < 0.0
    assert chi(p, MotionConstantsLite(0.1, 0.03)) < 0.0


def test_psi_example():
    p = InstantonParams(1, 2.0, 0, 3.0)
    psi, x = psi_chi(p, MotionConstantsLite(0.0, 1.0), math.pi / 6)
    assert psi == pytest.approx(2.0, rel=1e-14)
    assert x == pytest.approx(1.0, rel=1e-14)


def test_psi_nonzero_inside_cones():
    p = InstantonParams(0.1, 12.0, 0.3, 0.03)
    rng = np.random.default_rng(5)
    th = rng.uniform(0.0, 0.08, 4000) + 1e-3
    census = psi_cone_census(p, zip(th, rng.uniform(-2, 2, 4000), rng.uniform(-2, 2, 4000)))
    assert census["zero"] == 0
    assert census["positive"] + census["negative"] > 0


def test_profile_single_root_ads():
    c = MotionConstants.from_EL_Q(ADS, 1.0, 0.2, 0.1, 0.0)
    prof = potential_profile(ADS, c)
    assert prof.roots == pytest.approx((math.pi / 2,), abs=1e-12)


def test_profile_three_roots_ads():
    c = MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, 0.0)
    prof = potential_profile(ADS, c)
    assert len(prof.roots) == 3
    lo, mid, hi = prof.roots
    assert mid == pytest.approx(math.pi / 2, abs=1e-12)
    assert lo + hi == pytest.approx(math.pi, abs=1e-9)
    X, bound, ok = root_condition(ADS, c, lo)
    assert ok
    # S^2 = Lz^2 X / a^2 at the off-equator root
    assert math.sin(lo) ** 2 == pytest.approx(c.Lz**2 * X / ADS.a**2, rel=1e-8)


@given(finite(-3, 3), finite(-2, 2), finite(-2, 2).filter(lambda x: abs(x) > 1e-3))
def test_ads_root_count_one_or_three(q, E, Lz):
    c = MotionConstants.from_EL_Q(ADS, q, E, Lz, 0.0)
    prof = potential_profile(ADS, c)
    assert len(prof.roots) in (1, 3)
    if len(prof.roots) == 3:
        assert root_condition(ADS, c, prof.roots[0])[2]


@pytest.mark.parametrize("params", [InstantonParams(1, 0.8, 0.2, -1.2), InstantonParams(1, 0.5, 0.1, 0.5)])
def test_lz_zero_extra_roots(params):
    # 1 - Xi^3 E^2 / q just inside (0, L a^2)
    target = 1.1 if params.Lambda < 0 else 0.99
    E = math.sqrt(target / params.Xi**3)
    c = MotionConstants.from_EL_Q(params, 1.0, E, 0.0, 0.0)
    prof = potential_profile(params, c)
    formula = lazy_extra_roots(params, c)
    assert len(formula) == 2
    off = [x for x in prof.roots if abs(x - math.pi / 2) > 1e-6]
    assert np.allclose(off, formula, atol=1e-9)


def test_classify_equatorial_stable():
    c = MotionConstants.from_EL_Q(ADS, 1.0, 0.2, 0.1, 0.0)
    classes = classify_motion(ADS, c)
    assert [k.tag for k in classes] == [EQ_STABLE]
    assert classes[0].theta_range == pytest.approx((math.pi / 2, math.pi / 2), abs=1e-12)


def test_classify_double_well():
    c0 = MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, 0.0)
    vmin = min(v for _, v, k in potential_profile(ADS, c0).extrema if k == "min")
    tags = [k.tag for k in classify_motion(ADS, MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, vmin))]
    assert tags == [OFF_EQ_STABLE, OFF_EQ_STABLE]
    tags = [k.tag for k in classify_motion(ADS, MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, vmin / 2))]
    assert tags == [WELL, WELL]
    tags = [k.tag for k in classify_motion(ADS, MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, 0.03))]
    assert tags == [SYMMETRIC]


def test_classify_principal_equatorial_seed():
    # with a > 0 the potential rises off the equator, so Q = 0 pins theta there
    p = ADS
    r = 2.5
    s = TangentState(r, math.pi / 2, vr=0.1, vphi=-0.05 * p.a, vt=0.05 * (r * r - p.a**2))
    c = constants_from_state(p, 0.3, s)
    classes = classify_motion(p, c)
    assert len(classes) == 1
    lo, hi = classes[0].theta_range
    assert lo == pytest.approx(math.pi / 2, abs=1e-6) and hi == pytest.approx(math.pi / 2, abs=1e-6)


def test_classify_schwarzschild_seed_full_range():
    # a = 0 and Lz = 0 make V vanish identically: every theta is allowed
    p = InstantonParams(1, 0, 0, 0)
    c = constants_from_state(p, 0.0, TangentState(4.0, math.pi / 2, vr=1.0))
    assert [k.tag for k in classify_motion(p, c)] == [FULL_RANGE]


@given(finite(-3, 3), finite(-2, 2), finite(-2, 2), finite(-0.5, 0.5))
def test_allowed_set_reflection_invariant(q, E, Lz, Q):
    c1 = MotionConstants.from_EL_Q(ADS, q, E, Lz, Q)
    c2 = MotionConstants.from_EL_Q(ADS, q, -E, -Lz, Q)
    for dom in default_domains(ADS):
        a1 = allowed_intervals(ADS, c1, dom)
        a2 = allowed_intervals(ADS, c2, dom)
        assert len(a1) == len(a2)
        assert np.allclose(a1, a2, atol=1e-12) if a1 else True


def test_equilibria_equator_always():
    for c in (MotionConstants.from_EL_Q(ADS, 1.0, 0.2, 0.1, 0.0), MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, 0.0)):
        assert any(abs(th - math.pi / 2) < 1e-12 for th, _, _ in equilibria(ADS, c))


def test_equilibria_double_well_symmetric():
    c = MotionConstants.from_EL_Q(ADS, -1.0, 0.2, 0.05, 0.0)
    mins = [(th, v) for th, v, st_ in equilibria(ADS, c) if st_ == "stable"]
    assert len(mins) == 2
    assert mins[0][0] + mins[1][0] == pytest.approx(math.pi, abs=1e-9)
    assert mins[0][1] == pytest.approx(mins[1][1], rel=1e-9)


def test_equilibria_lz_zero_parabola():
    c = MotionConstants.from_EL_Q(ADS, 1.0, 0.2, 0.0, 0.0)
    assert c.q_mass > ADS.Xi**2 * c.E**2
    eq = equilibria(ADS, c)
    assert [(round(th, 12), st_) for th, _, st_ in eq] == [(round(math.pi / 2, 12), "stable")]
    grid = np.linspace(0.01, math.pi - 0.01, 200)
    assert min(potential_V(ADS, c, x) for x in grid) >= potential_V(ADS, c, math.pi / 2) - 1e-15


def test_lazy_signs_ads_examples():
    chart = block_chart(ADS)
    r_plus = chart.roots.roots[-1]
    assert lazy_signs(ADS, +1, r_plus + 1.0, 1.0)[1] == +1
    r_I = 0.5 * r_plus
    assert eval_scalars(ADS, r_I, 1.0).Sigma > 0
    assert lazy_signs(ADS, +1, r_I, 1.0)[1] == -1


def test_lazy_signs_omega_negation():
    p = InstantonParams(1, 0.9, 0.2, -0.3)
    r = 0.3
    out = lazy_signs(p, +1, r, 0.2)
    inn = lazy_signs(p, +1, r, 1.3)
    assert eval_scalars(p, r, 0.2).Sigma < 0 < eval_scalars(p, r, 1.3).Sigma
    assert out == tuple(-x for x in inn)


@given(finite(-6, 6), finite(0.05, math.pi - 0.05), st.sampled_from([-1, 1]))
def test_lazy_signs_match_rates(r, th, qe):
    sc = eval_scalars(ADS, r, th)
    assume(abs(sc.Delta_r) > 1e-6 and abs(sc.Sigma) > 1e-6 and abs(r * r - ADS.a**2) > 1e-6 and r != 0)
    t_rate, phi_rate = lazy_rates(ADS, 0.5 * qe / ADS.e, r, th)
    assert lazy_signs(ADS, qe, r, th) == (np.sign(t_rate), np.sign(phi_rate))


def test_lazy_table_ads_matches():
    rows = lazy_table(InstantonParams(1, 0.3, 0.2, -0.3))
    assert len(rows) == 8
    assert all(row["phi_match"] and row["t_match"] for row in rows)
