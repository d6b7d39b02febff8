import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import chart_point_st, params_st, rel
from kninstanton.errors import ChartFailure, InvalidParameters, SingularityHit
from kninstanton.geometry import (
    DEGENERATE,
    LORENTZIAN,
    RIEMANNIAN,
    TWO_TWO,
    InstantonParams,
    check_chart,
    det_tphi_closed,
    eval_scalars,
    frame_inner_products,
    maxwell_potential,
    metric_contravariant,
    metric_covariant,
    positivity_combination,
    signature_at,
)
from kninstanton.horizons import block_chart


def line_element(params, r, theta):
    """Metric read off the four squared 1-forms, without the library's grouping."""
    M, a, e, L = params.M, params.a, params.e, params.L
    S, C = math.sin(theta), math.cos(theta)
    Sig = r**2 - a**2 * C**2
    Dr = (r**2 - a**2) * (1 - L * r**2) - 2 * M * r - e**2
    Dth = 1 - L * a**2 * C**2
    Xi = 1 - L * a**2
    f1 = S**2 * Dth / (Xi**2 * Sig)  # (a dt + (r^2-a^2) dphi)^2
    f2 = Dr / (Xi**2 * Sig)  # (dt - a S^2 dphi)^2
    u = np.array([a, r**2 - a**2])
    w = np.array([1.0, -a * S**2])
    blk = f1 * np.outer(u, u) + f2 * np.outer(w, w)
    return Sig / Dr, Sig / Dth, blk


def test_params_derived():
    p = InstantonParams(1.0, 1.0, 0.0, -3.0)
    assert p.L == -1.0
    assert p.Xi == 2.0
    sc = eval_scalars(p, 1.0, 0.0)
    assert sc.Delta_theta == 2.0


def test_params_reject():
    with pytest.raises(InvalidParameters):
        InstantonParams(1.0, -0.1, 0.0, 0.0)
    with pytest.raises(InvalidParameters):
        InstantonParams(float("nan"), 0.1, 0.0, 0.0)


def test_scalars_schwarzschild_like():
    sc = eval_scalars(InstantonParams(1, 0, 0, 0), 4.0, math.pi / 2)
    assert (sc.Sigma, sc.Delta_r, sc.Delta_theta, sc.Xi) == (16.0, 8.0, 1.0, 1.0)


def test_delta_r_at_origin():
    sc = eval_scalars(InstantonParams(1, 0.1, 0.1, 0.03), 0.0, 1.0)
    assert sc.Delta_r == pytest.approx(-0.02, rel=1e-14)


def test_metric_schwarzschild_like():
    g = metric_covariant(InstantonParams(1, 0, 0, 0), 4.0, math.pi / 2)
    assert (g.g_rr, g.g_thth, g.g_phiphi, g.g_tt, g.g_tphi) == (2.0, 16.0, 16.0, 0.5, 0.0)


def test_metric_generic_matches_line_element():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    g = metric_covariant(p, 2.0, 1.0)
    g_rr, g_thth, blk = line_element(p, 2.0, 1.0)
    assert rel(g.g_rr, g_rr) < 1e-14
    assert rel(g.g_thth, g_thth) < 1e-14
    assert rel(g.g_tt, blk[0, 0]) < 1e-13
    assert rel(g.g_tphi, blk[0, 1]) < 1e-13
    assert rel(g.g_phiphi, blk[1, 1]) < 1e-13


def test_g_tphi_vanishes_toward_pole():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    vals = [abs(metric_covariant(p, 2.0, th).g_tphi) for th in (1e-2, 1e-4, 1e-6)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-11


def test_det_identity_at_example():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    g = metric_covariant(p, 2.0, 1.0)
    assert rel(g.det_tphi, det_tphi_closed(p, 2.0, 1.0)) < 1e-12


def test_inverse_a_zero_is_diagonal():
    g = metric_contravariant(InstantonParams(1, 0, 0.3, -0.2), 3.0, 1.1)
    assert g.inv_tphi == 0.0
    assert rel(g.inv_tt, 1.0 / g.g_tt) < 1e-15


@given(params_st(), st.data())
def test_inverse_block_is_inverse(p, data):
    r, th = data.draw(chart_point_st(p))
    g = metric_contravariant(p, r, th)
    cov = np.array([[g.g_tt, g.g_tphi], [g.g_tphi, g.g_phiphi]])
    inv = np.array([[g.inv_tt, g.inv_tphi], [g.inv_tphi, g.inv_phiphi]])
    scale = np.abs(cov) @ np.abs(inv)
    assert np.all(np.abs(cov @ inv - np.eye(2)) <= 1e-12 * scale)


@given(params_st(), st.data())
def test_det_tphi_identity(p, data):
    r, th = data.draw(chart_point_st(p))
    g = metric_covariant(p, r, th)
    scale = abs(g.g_tt * g.g_phiphi) + g.g_tphi**2
    assert abs(g.det_tphi - det_tphi_closed(p, r, th)) <= 1e-11 * scale


def test_maxwell_zero_charge():
    A = maxwell_potential(InstantonParams(1, 0.3, 0.0, 0.1), 2.0, 1.0)
    assert A.A_t == 0.0 and A.A_phi == 0.0


@given(params_st(), st.data())
def test_maxwell_identities(p, data):
    r, th = data.draw(chart_point_st(p))
    A = maxwell_potential(p, r, th)
    S2 = math.sin(th) ** 2
    terms = (p.e * r / p.Xi, p.a * A.A_phi, (r * r - p.a**2) * A.A_t)
    assert abs(terms[0] - terms[1] + terms[2]) <= 1e-12 * max(map(abs, terms)) + 1e-300
    assert abs(A.A_phi + p.a * S2 * A.A_t) <= 1e-14 * abs(A.A_phi) + 1e-300


def full_metric(params, r, theta):
    g_rr, g_thth, blk = line_element(params, r, theta)
    g = np.zeros((4, 4))
    g[0, 0], g[1, 1], g[2:, 2:] = g_rr, g_thth, blk
    return g


def test_signature_ads_outside():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    r_plus = block_chart(p).roots.roots[-1]
    assert signature_at(p, r_plus + 1.0, 1.0).klass == RIEMANNIAN


def test_signature_ads_block_I_two_negative():
    # Delta_r < 0 flips g_rr and the (t, phi) determinant together
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    r_minus, r_plus = block_chart(p).roots.roots
    r_mid = 0.5 * (max(r_minus, 0.0) + r_plus)
    s = signature_at(p, r_mid, math.pi / 2)
    assert s.negative_count == int(np.sum(np.linalg.eigvalsh(full_metric(p, r_mid, math.pi / 2)) < 0)) == 2
    assert s.klass == TWO_TWO


@pytest.mark.xfail(strict=True, reason="the tabulated block list calls Block I Lorentzian; eigenvalues give 2 negative")
def test_signature_ads_block_I_tabulated():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    r_minus, r_plus = block_chart(p).roots.roots
    assert signature_at(p, 0.5 * (max(r_minus, 0.0) + r_plus), math.pi / 2).klass == LORENTZIAN


def test_signature_a_zero_eigenvalues():
    p = InstantonParams(1, 0, 0.2, -0.3)
    s = signature_at(p, 3.0, 1.0)
    g = metric_covariant(p, 3.0, 1.0)
    assert max(s.lambda3, s.lambda4) == pytest.approx(max(g.g_phiphi, g.g_tt), rel=1e-14)
    assert min(s.lambda3, s.lambda4) == pytest.approx(min(g.g_phiphi, g.g_tt), rel=1e-14)


@given(params_st(), st.data())
def test_signature_eigenvalues_match_numpy(p, data):
    r, th = data.draw(chart_point_st(p))
    s = signature_at(p, r, th)
    g = metric_covariant(p, r, th)
    blk = np.linalg.eigvalsh(np.array([[g.g_tt, g.g_tphi], [g.g_tphi, g.g_phiphi]]))
    scale = np.max(np.abs(blk))
    assert np.allclose(sorted((s.lambda3, s.lambda4)), blk, rtol=0, atol=1e-12 * scale)
    if s.klass != DEGENERATE:
        assert s.negative_count == sum(x < 0 for x in s.eigenvalues)


def test_frame_products_a_zero():
    fp = frame_inner_products(InstantonParams(1, 0, 0.2, -0.3), 3.0, 1.0)
    assert fp.contraction[0] == 0.0
    assert fp.closed_form[3] == 0.0


@given(params_st(), st.data())
def test_frame_products_closed_form(p, data):
    r, th = data.draw(chart_point_st(p))
    fp = frame_inner_products(p, r, th)
    assert fp.max_rel_discrepancy <= 1e-11
    sc = eval_scalars(p, r, th)
    assert np.sign(fp.closed_form[4]) == np.sign(sc.Delta_r * sc.Sigma)
    assert np.sign(fp.closed_form[5]) == np.sign(sc.Delta_theta * sc.Sigma)


@given(params_st(), st.data())
def test_positivity_combination(p, data):
    r, th = data.draw(chart_point_st(p))
    if p.a < 1e-3:
        return
    lhs, rhs, scale = positivity_combination(p, r, th)
    assert abs(lhs - rhs) <= 1e-11 * scale


def test_chart_failures():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    with pytest.raises(ChartFailure):
        check_chart(eval_scalars(p, 2.0, 0.0))
    with pytest.raises(SingularityHit):
        check_chart(eval_scalars(p, 0.3 * math.cos(1.0), 1.0))
    r_plus = block_chart(p).roots.roots[-1]
    with pytest.raises(ChartFailure):
        metric_covariant(p, r_plus, 1.0)
    with pytest.raises(InvalidParameters):
        eval_scalars(p, 1.0, -0.1)
