import math

import numpy as np
import pytest
from hypothesis import assume, given

from conftest import params_st
from kninstanton.errors import QuarticDegenerate, UnchartedStructure
from kninstanton.geometry import InstantonParams, delta_r
from kninstanton.horizons import (
    FOUR_REAL,
    INSIDE,
    NO_REAL,
    ON,
    OUTSIDE,
    QUADRATIC,
    TWO_REAL,
    block_chart,
    delta_r_roots,
    discriminants,
    negative_root_count,
    quartic_coefficients,
    residual_scale,
    singularity_test,
    theta_horizons,
)

# companion-matrix values for (M, a, e, Lambda) = (1, 0.1, 0.1, 0.03), frozen
DS_EXAMPLE_ROOTS = (-10.880045098278568, -0.009950488982906094, 2.1022057194877517, 8.787789867773721)


def params_from_L(M, a, e, L):
    return InstantonParams(M, a, e, 3.0 * L)


def test_d1_example():
    d = discriminants(params_from_L(1.0, 1.0, 0.0, 1.0 / 3.0))
    assert d.D1 == pytest.approx(32.0 / 9.0, rel=1e-14)


def test_d3_small_L():
    # D3 = 16 L (a^2 + M^2 + e^2) + O(L^2): the remainder over L^2 settles to a constant
    ratios = []
    for L in (1e-2, 1e-3, 1e-4):
        p = params_from_L(1.0, 0.1, 0.1, L)
        lead = 16.0 * L * (p.a**2 + p.M**2 + p.e**2)
        ratios.append((discriminants(p).D3 - lead) / L**2)
    assert abs(ratios[2] - ratios[1]) < 0.1 * abs(ratios[1] - ratios[0]) * 10
    assert abs(ratios[2] - ratios[1]) <= 1e-2 * abs(ratios[2])


def test_d3_ads_negative():
    p = params_from_L(1.0, 0.5, 0.5, -1.0)
    d = discriminants(p)
    assert d.D3 < 0
    assert d.predicted_real_count == delta_r_roots(p).real_count == 2


def test_quadratic_case():
    rs = delta_r_roots(InstantonParams(1, 0, 0, 0))
    assert rs.tag == QUADRATIC
    assert rs.roots == (0.0, 2.0)


def test_no_real():
    rs = delta_r_roots(params_from_L(0.0, 0.0, 1.0, 1.0))
    assert rs.tag == NO_REAL and rs.roots == ()


def test_ds_example_roots():
    rs = delta_r_roots(InstantonParams(1, 0.1, 0.1, 0.03))
    assert rs.tag == FOUR_REAL
    assert np.allclose(rs.roots, DS_EXAMPLE_ROOTS, rtol=1e-12, atol=0)


def test_ds_example_roots_against_numpy():
    p = InstantonParams(1, 0.1, 0.1, 0.03)
    ref = np.sort(np.roots(quartic_coefficients(p)).real)
    assert np.allclose(delta_r_roots(p).roots, ref, rtol=1e-9)


@given(params_st())
def test_roots_are_zeros(p):
    try:
        rs = delta_r_roots(p)
    except QuarticDegenerate:
        # only when the far pair is past the float range
        assert abs(p.L) < 1e-290
        return
    for r in rs.roots:
        assert abs(delta_r(p, r)) <= 1e-9 * (1 + abs(p.L) * r * r * r * r + abs(2 * p.M * r) + p.a**2 + p.e**2)
        assert abs(delta_r(p, r)) <= 1e-9 * residual_scale(p, r)


@given(params_st())
def test_discriminant_count_matches_companion(p):
    # Lambda/3 can underflow to 0 for denormal Lambda
    assume(p.L != 0.0)
    d = discriminants(p)
    assume(not d.near_degenerate)
    rs = delta_r_roots(p)
    assume(all(m == 1 for m in rs.multiplicities))
    assert d.predicted_real_count == rs.real_count


def test_blocks_ads():
    chart = block_chart(params_from_L(1.0, 0.5, 0.5, -1.0))
    assert {b.label for b in chart.blocks} == {"AdS", "I", "II"}
    assert chart.blocks[-1].label == "AdS"


def test_blocks_ds():
    chart = block_chart(InstantonParams(1, 0.1, 0.1, 0.03))
    assert [b.label for b in chart.blocks] == ["dS-", "III", "II", "I", "dS+"]
    assert chart.block_of(5.0) == "I"
    assert chart.block_of(DS_EXAMPLE_ROOTS[2]) in (None, "II", "I")


def test_blocks_no_real():
    with pytest.raises(UnchartedStructure) as info:
        block_chart(params_from_L(0.0, 0.0, 1.0, 1.0))
    chart = info.value.chart
    assert len(chart.blocks) == 1 and chart.blocks[0].label is None
    assert "no horizons" in chart.note


def test_small_lambda_ads_two_roots():
    rng = np.random.default_rng(7)
    for _ in range(200):
        M, a, e = rng.uniform(0.1, 3), rng.uniform(0, 3), rng.uniform(0, 1.5)
        w = M**2 + a**2 + e**2
        L = -rng.uniform(0, 1e-2 / w)
        p = params_from_L(M, a, e, L)
        rs = delta_r_roots(p)
        assert rs.tag == TWO_REAL
        assert rs.roots[0] < 0 < rs.roots[1]


def test_theta_horizons_example():
    th = theta_horizons(InstantonParams(1, 2.0, 0, 3.0))
    assert th.a_crit == 1.0
    assert th.theta_minus == pytest.approx(math.pi / 3, rel=1e-15)
    assert th.theta_plus == pytest.approx(2 * math.pi / 3, rel=1e-15)
    assert math.cos(th.theta_minus) ** 2 == pytest.approx(0.25, rel=1e-12)


def test_theta_horizons_absent():
    assert not theta_horizons(InstantonParams(1, 0.5, 0, 3.0)).present
    for a in (0.1, 1.0, 10.0):
        th = theta_horizons(InstantonParams(1, a, 0, -3.0))
        assert not th.present and th.a_crit is None


@given(params_st(lam=(1e-3, 1.5)))
def test_theta_horizon_law(p):
    th = theta_horizons(p)
    assert th.present == (p.a > math.sqrt(3.0 / p.Lambda))
    if th.present:
        for ang in (th.theta_minus, th.theta_plus):
            assert abs(math.cos(ang) ** 2 - 1.0 / (p.L * p.a**2)) <= 1e-12


def test_singularity_examples():
    p = InstantonParams(1, 0.1, 0, 0)
    rep = singularity_test(p, 0.05, 0.0)
    assert rep.location == INSIDE
    assert rep.Sigma == pytest.approx(-0.0075, rel=1e-12)
    assert singularity_test(p, 0.1, 0.0).location == ON
    assert singularity_test(p, 3.0, math.pi / 2).location == OUTSIDE
    assert singularity_test(p, -0.02, math.pi / 2).location == OUTSIDE


def test_negative_root_count_ds_example():
    # two negative roots, not one
    assert negative_root_count(InstantonParams(1, 0.1, 0.1, 0.03)) == 2


def test_tiny_lambda_split():
    p = InstantonParams(1, 0.3, 0.1, 3e-20)
    rs = delta_r_roots(p)
    assert rs.tag == FOUR_REAL
    near = np.roots([1.0 + p.L * p.a**2, -2.0, -(p.a**2 + p.e**2)])
    assert np.allclose(sorted(near), rs.roots[1:3], rtol=1e-12)
    assert rs.roots[3] == pytest.approx(math.sqrt(1.0 / p.L), rel=1e-9)
    with pytest.raises(QuarticDegenerate):
        delta_r_roots(InstantonParams(1, 0.3, 0.1, 1e-310))
