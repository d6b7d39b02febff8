"""
First integrals of charged geodesic motion and the separated equations.

The Lagrangian is ``1/2 g_ab x'^a x'^b - q A_a x'^a`` so canonical momenta
are ``p_a = g_ab v^b - q A_a``.  The charge coupling ``q_charge`` is kept
apart from the rest mass ``q_mass = g(v, v)``; the two are easy to mix up.
"""

from dataclasses import dataclass

import numpy as np

from ._numeric import rel_diff
from .errors import BothHorizons, PoleEvaluation
from .geometry import (
    check_chart,
    delta_r,
    delta_r_prime,
    eval_scalars,
    maxwell_potential,
    metric_contravariant,
    metric_covariant,
    sin_cos,
)

SWITCH_EPS = 1e-8


@dataclass(frozen=True)
class TangentState:
    r: float
    theta: float
    phi: float = 0.0
    t: float = 0.0
    vr: float = 0.0
    vtheta: float = 0.0
    vphi: float = 0.0
    vt: float = 0.0

    def as_tuple(self):
        return (self.r, self.theta, self.phi, self.t, self.vr, self.vtheta, self.vphi, self.vt)


@dataclass(frozen=True)
class MotionConstants:
    """First integrals; ``K == Q + Xi^2 (Lz - a E)^2`` holds by construction.

    ``K_radial``/``K_polar`` are the two independent evaluations of the
    Carter constant when both were computable.
    """

    q_mass: float
    E: float
    Lz: float
    K: float
    Q: float
    q_charge: float = 0.0
    K_radial: float = None
    K_polar: float = None
    K_rel_discrepancy: float = None

    @classmethod
    def from_EL_K(cls, params, q_mass, E, Lz, K, q_charge=0.0):
        Q = K - params.Xi**2 * (Lz - params.a * E) ** 2
        return cls(q_mass=q_mass, E=E, Lz=Lz, K=K, Q=Q, q_charge=q_charge)

    @classmethod
    def from_EL_Q(cls, params, q_mass, E, Lz, Q, q_charge=0.0):
        K = Q + params.Xi**2 * (Lz - params.a * E) ** 2
        return cls(q_mass=q_mass, E=E, Lz=Lz, K=K, Q=Q, q_charge=q_charge)

    def to_dict(self):
        return {
            "q_mass": self.q_mass,
            "E": self.E,
            "Lz": self.Lz,
            "K": self.K,
            "Q": self.Q,
            "q_charge": self.q_charge,
        }


@dataclass(frozen=True)
class SeparationReport:
    H: float
    H_r: float
    H_theta: float
    U_r: float
    U_theta: float
    residual_hamiltonian: float
    residual_carter: float


def canonical_momenta(params, q_charge, state, _sc=None):
    """(p_r, p_theta, p_phi, p_t) at the state."""
    g = metric_covariant(params, state.r, state.theta, _sc)
    A = maxwell_potential(params, state.r, state.theta)
    p_t = g.g_tt * state.vt + g.g_tphi * state.vphi - q_charge * A.A_t
    p_phi = g.g_tphi * state.vt + g.g_phiphi * state.vphi - q_charge * A.A_phi
    return g.g_rr * state.vr, g.g_thth * state.vtheta, p_phi, p_t


def norm2(params, state, _sc=None):
    """g(v, v) together with the sum of absolute terms."""
    g = metric_covariant(params, state.r, state.theta, _sc)
    terms = (
        g.g_rr * state.vr**2,
        g.g_thth * state.vtheta**2,
        g.g_tt * state.vt**2,
        2.0 * g.g_tphi * state.vt * state.vphi,
        g.g_phiphi * state.vphi**2,
    )
    return sum(terms), sum(abs(x) for x in terms)


def P_of_r(params, consts, r):
    return (
        consts.q_charge * params.e * r / params.Xi
        + params.a * consts.Lz
        + (r * r - params.a**2) * consts.E
    )


def D_of_theta(params, consts, theta):
    S, _, _ = sin_cos(theta)
    return consts.Lz - params.a * consts.E * S * S


def constants_from_state(params, q_charge, state):
    sc = eval_scalars(params, state.r, state.theta)
    check_chart(sc)
    _, _, p_phi, p_t = canonical_momenta(params, q_charge, state, sc)
    q_mass, q_scale = norm2(params, state, sc)
    E, Lz = -p_t, p_phi
    partial = MotionConstants(q_mass=q_mass, E=E, Lz=Lz, K=0.0, Q=0.0, q_charge=q_charge)

    Xi2 = sc.Xi**2
    P = P_of_r(params, partial, state.r)
    D = D_of_theta(params, partial, state.theta)
    r2 = state.r**2
    scale_r = max(1.0, r2, abs(params.L) * r2 * r2)
    # P and D cancel the charge terms; their round-off follows the term sizes
    a = params.a
    P_mag = abs(q_charge * params.e * state.r / sc.Xi) + abs(a * p_phi) + abs((r2 - a * a) * p_t)
    D_mag = abs(a * sc.S**2 * p_t) + abs(p_phi)

    K_rad = K_pol = None
    terms = []
    if abs(sc.Delta_r) >= SWITCH_EPS * scale_r:
        head, tail = q_mass * r2, (sc.Sigma**2 * state.vr**2 + Xi2 * P * P) / sc.Delta_r
        K_rad = head - tail
        terms += [head, tail, q_scale * r2, Xi2 * P_mag * P_mag / abs(sc.Delta_r)]
    if abs(sc.Delta_theta) >= SWITCH_EPS:
        head = q_mass * params.a**2 * sc.C**2
        tail = (sc.Sigma**2 * state.vtheta**2 + Xi2 * D * D / sc.S**2) / sc.Delta_theta
        K_pol = head + tail
        terms += [head, tail, q_scale * params.a**2 * sc.C**2, Xi2 * D_mag * D_mag / abs(sc.S**2 * sc.Delta_theta)]
    if K_rad is None and K_pol is None:
        raise BothHorizons(f"Delta_r and Delta_theta both vanish at r={state.r}, theta={state.theta}")

    K = K_rad if K_rad is not None else K_pol
    disc = None
    if K_rad is not None and K_pol is not None:
        disc = rel_diff(K_rad, K_pol, max(abs(x) for x in terms))
    Q = K - Xi2 * (Lz - params.a * E) ** 2
    return MotionConstants(
        q_mass=q_mass,
        E=E,
        Lz=Lz,
        K=K,
        Q=Q,
        q_charge=q_charge,
        K_radial=K_rad,
        K_polar=K_pol,
        K_rel_discrepancy=disc,
    )


def radial_R(params, consts, r):
    P = P_of_r(params, consts, r)
    return delta_r(params, r) * (consts.q_mass * r * r - consts.K) - params.Xi**2 * P * P


def radial_R_prime(params, consts, r):
    P = P_of_r(params, consts, r)
    dP = consts.q_charge * params.e / params.Xi + 2.0 * r * consts.E
    return (
        delta_r_prime(params, r) * (consts.q_mass * r * r - consts.K)
        + 2.0 * consts.q_mass * r * delta_r(params, r)
        - 2.0 * params.Xi**2 * P * dP
    )


def _d_over_s_sq(params, consts, S):
    """Xi^2 D^2 / S^2 with the analytic pole limit when Lz = 0."""
    if S == 0.0:
        if consts.Lz != 0.0:
            raise PoleEvaluation("D^2/S^2 diverges at a pole with Lz != 0")
        return 0.0
    return params.Xi**2 * (consts.Lz / S - params.a * consts.E * S) ** 2


def colat_Theta(params, consts, theta):
    S, C, _ = sin_cos(theta)
    dth = 1.0 - params.L * params.a**2 * C * C
    return dth * (consts.K - consts.q_mass * params.a**2 * C * C) - _d_over_s_sq(params, consts, S)


def colat_Theta_prime(params, consts, theta):
    S, C, _ = sin_cos(theta)
    if S == 0.0:
        raise PoleEvaluation("Theta' needs S != 0")
    a2 = params.a**2
    dth = 1.0 - params.L * a2 * C * C
    ddth = 2.0 * params.L * a2 * C * S
    D = consts.Lz - params.a * consts.E * S * S
    dD = -2.0 * params.a * consts.E * S * C
    return (
        ddth * (consts.K - consts.q_mass * a2 * C * C)
        + dth * 2.0 * consts.q_mass * a2 * C * S
        - params.Xi**2 * (2.0 * D * dD / S**2 - 2.0 * D * D * C / S**3)
    )


def coordinate_rates(params, consts, r, theta):
    """(t', phi') from the first-integral equations."""
    sc = eval_scalars(params, r, theta)
    check_chart(sc)
    P = P_of_r(params, consts, r)
    D = D_of_theta(params, consts, theta)
    Xi2 = sc.Xi**2
    a = params.a
    rr = r * r - a * a
    t_rate = Xi2 / sc.Sigma * (-rr * P / sc.Delta_r + D * a / sc.Delta_theta)
    phi_rate = Xi2 / sc.Sigma * (a * P / sc.Delta_r + D / (sc.S**2 * sc.Delta_theta))
    return t_rate, phi_rate


def separation_check(params, q_charge, state):
    sc = eval_scalars(params, state.r, state.theta)
    check_chart(sc)
    g = metric_contravariant(params, state.r, state.theta, sc)
    A = maxwell_potential(params, state.r, state.theta)
    p_r, p_th, p_phi, p_t = canonical_momenta(params, q_charge, state, sc)
    pit = p_t + q_charge * A.A_t
    pip = p_phi + q_charge * A.A_phi
    h_terms = (
        g.inv_rr * p_r**2,
        g.inv_thth * p_th**2,
        g.inv_tt * pit**2,
        2.0 * g.inv_tphi * pit * pip,
        g.inv_phiphi * pip**2,
    )
    H = 0.5 * sum(h_terms)
    h_scale = 0.5 * sum(abs(x) for x in h_terms)

    a, Xi2 = params.a, sc.Xi**2
    P = q_charge * params.e * state.r / sc.Xi + a * p_phi - (state.r**2 - a * a) * p_t
    D = a * sc.S**2 * p_t + p_phi
    H_r = p_r**2 * sc.Delta_r + Xi2 * P * P / sc.Delta_r
    H_th = p_th**2 * sc.Delta_theta + Xi2 * D * D / (sc.S**2 * sc.Delta_theta)
    U_r = state.r**2
    U_th = -(a**2) * sc.C**2

    two_sigma_H = 2.0 * sc.Sigma * H
    res_H = rel_diff(H_r + H_th, two_sigma_H, max(abs(H_r), abs(H_th), 2.0 * abs(sc.Sigma) * h_scale))
    q_mass = 2.0 * H
    K_theta = H_th - q_mass * U_th
    K_r = q_mass * U_r - H_r
    # q_mass = 2H inherits the term scale of H, so it enters the denominator
    q_scale = 2.0 * h_scale
    res_K = rel_diff(K_theta, K_r, max(abs(H_r), abs(H_th), q_scale * U_r, q_scale * abs(U_th)))
    return SeparationReport(H, H_r, H_th, U_r, U_th, res_H, res_K)


def admissibility(params, consts, r):
    """R(r) >= 0, plus q_mass r^2 - K (Sigma times the principal-plane norm)."""
    R = radial_R(params, consts, r)
    return {"admissible": R >= 0.0, "gamma_pi_norm_scaled": consts.q_mass * r * r - consts.K, "R": R}


def angular_identity(params, theta, Lz, E):
    """Both sides of
    Delta_theta (Lz - aE)^2 - (Lz - aE S^2)^2 / S^2
        = -a^2 C^2 (Lz^2 / (a^2 S^2) + L (Lz - aE)^2 - E^2).
    """
    S, C, _ = sin_cos(theta)
    a, L = params.a, params.L
    dth = 1.0 - L * a * a * C * C
    lhs_terms = (dth * (Lz - a * E) ** 2, -((Lz - a * E * S * S) ** 2) / S**2)
    # a^2 C^2 * Lz^2 / (a^2 S^2) written without the a^2 so a = 0 is allowed
    rhs_terms = (-(C * C) * Lz * Lz / (S * S), -a * a * C * C * L * (Lz - a * E) ** 2, a * a * C * C * E * E)
    scale = max(abs(x) for x in lhs_terms + rhs_terms)
    return sum(lhs_terms), sum(rhs_terms), scale


def mass_splitting(params, q_charge, state):
    """Both sides of q_mass Sigma = radial part + polar part."""
    c = constants_from_state(params, q_charge, state)
    sc = eval_scalars(params, state.r, state.theta)
    Xi2 = sc.Xi**2
    P = P_of_r(params, c, state.r)
    D = D_of_theta(params, c, state.theta)
    rad = (sc.Sigma**2 * state.vr**2 + Xi2 * P * P) / sc.Delta_r
    pol = (sc.Sigma**2 * state.vtheta**2 + Xi2 * D * D / sc.S**2) / sc.Delta_theta
    _, q_scale = norm2(params, state, sc)
    return c.q_mass * sc.Sigma, rad + pol, max(abs(rad), abs(pol), q_scale * abs(sc.Sigma))


def contraction_P_D(params, q_charge, state):
    """(-<v, V>, <v, W>) by metric contraction, with their term scales.

    No Maxwell potential enters; comparing against P and D checks the
    charge cancellation.
    """
    sc = eval_scalars(params, state.r, state.theta)
    g = metric_covariant(params, state.r, state.theta, sc)
    a = params.a
    Vt, Vp = state.r**2 - a * a, -a
    Wt, Wp = a * sc.S**2, 1.0
    vt, vp = state.vt, state.vphi

    def dot(ut, up):
        terms = (ut * vt * g.g_tt, (ut * vp + up * vt) * g.g_tphi, up * vp * g.g_phiphi)
        return sum(terms), sum(abs(x) for x in terms)

    v_dot_V, sV = dot(Vt, Vp)
    v_dot_W, sW = dot(Wt, Wp)
    return -v_dot_V, v_dot_W, sV, sW


def constants_batch(params, q_charge, r, theta, vr, vtheta, vphi, vt):
    """Vectorised (q_mass, E, Lz, K) over arrays of tangent states, with term scales.

    K uses the radial form where Delta_r is clear of zero and the polar form
    elsewhere, like ``constants_from_state``.  Returns two dicts of arrays:
    values and the summed magnitudes of the terms behind each value.
    """
    r, theta = np.asarray(r, float), np.asarray(theta, float)
    vr, vtheta, vphi, vt = (np.asarray(x, float) for x in (vr, vtheta, vphi, vt))
    a, e, L, Xi = params.a, params.e, params.L, params.Xi
    S, C = np.sin(theta), np.cos(theta)
    a2, r2, S2 = a * a, r * r, S * S
    rr = r2 - a2
    Sig = r2 - a2 * C * C
    dr = rr * (1.0 - L * r2) - 2.0 * params.M * r - e * e
    dth = 1.0 - L * a2 * C * C
    w = 1.0 / (Xi * Xi * Sig)
    gtt = (a2 * S2 * dth + dr) * w
    gtp = a * S2 * (dth * rr - dr) * w
    gpp = S2 * (dth * rr * rr + dr * a2 * S2) * w
    grr = Sig / dr
    gthth = Sig / dth
    f = e * r / (Sig * Xi)
    At, Ap = -f, f * a * S2

    qterms = (grr * vr**2, gthth * vtheta**2, gtt * vt**2, 2.0 * gtp * vt * vphi, gpp * vphi**2)
    q = sum(qterms)
    q_scale = sum(np.abs(x) for x in qterms)
    eterms = (gtt * vt, gtp * vphi, -q_charge * At)
    E = -sum(eterms)
    lterms = (gtp * vt, gpp * vphi, -q_charge * Ap)
    Lz = sum(lterms)

    Xi2 = Xi * Xi
    P = q_charge * e * r / Xi + a * Lz + rr * E
    D = Lz - a * E * S2
    rad_head = q * r2
    rad_tail = (Sig**2 * vr**2 + Xi2 * P * P) / dr
    pol_head = q * a2 * C * C
    pol_tail = (Sig**2 * vtheta**2 + Xi2 * D * D / S2) / dth
    use_rad = np.abs(dr) >= SWITCH_EPS * np.maximum(1.0, np.maximum(r2, abs(L) * r2 * r2))
    K = np.where(use_rad, rad_head - rad_tail, pol_head + pol_tail)
    K_scale = np.where(
        use_rad,
        np.abs(rad_head) + np.abs(rad_tail) + q_scale * r2,
        np.abs(pol_head) + np.abs(pol_tail) + q_scale * a2 * C * C,
    )
    values = {"q_mass": q, "E": E, "Lz": Lz, "K": K}
    scales = {
        "q_mass": q_scale,
        "E": sum(np.abs(x) for x in eterms),
        "Lz": sum(np.abs(x) for x in lterms),
        "K": K_scale,
    }
    return values, scales
