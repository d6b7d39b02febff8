"""
Colatitude dynamics: the rotational potential V(theta), its profile and
extrema, orbit classification, and lazy-particle sign tables.

With Q the shifted Carter constant, Q = T + V where T = Sigma^2 theta'^2 /
Delta_theta.  V carries a C^2 factor, so V = C^2 F(theta) and the roots
other than pi/2 are the sign changes of F.  dV/dtheta = -2 C S G(theta);
the extrema other than pi/2 are sign changes of G.
"""

import math
from dataclasses import dataclass, field

from ._numeric import bisect_root, sign
from .errors import ChartFailure, DomainEmpty, PoleEvaluation, ThetaHorizonEvaluation
from .geometry import eval_scalars, sin_cos
from .horizons import block_chart, theta_horizons
from .integrals import colat_Theta

EPS_DTH = 1e-12
SCAN_STEP = math.pi / 2048
THETA_TOL = 1e-10
MARGIN = 1e-6
TIE_RTOL = 1e-9

# orbit tags
EQ_STABLE = "EquatorialStableEquilibrium"
EQ_UNSTABLE = "EquatorialUnstableEquilibrium"
SYMMETRIC = "SymmetricOscillation"
WELL = "OffEquatorWellOscillation"
OFF_EQ_STABLE = "OffEquatorStableEquilibrium"
ASYMPTOTIC = "AsymptoticToEquator"
FULL_RANGE = "FullRangePoleToPole"
POLE_REACHING = "PoleReaching"
CONE_CONFINED = "ConeConfined"
HORIZON_ASYMPTOTIC = "HorizonAsymptotic"
FORBIDDEN = "Forbidden"


@dataclass(frozen=True)
class PotentialProfile:
    samples: tuple
    roots: tuple
    extrema: tuple
    pole_limits: tuple
    cone_limits: tuple = None
    domains: tuple = ()


@dataclass(frozen=True)
class OrbitClass:
    tag: str
    theta_range: tuple
    witnesses: dict = field(default_factory=dict)
    ref_bullet: str = ""


def chi(params, consts):
    """L (Lz - a E)^2 - E^2, independent of theta."""
    return params.L * (consts.Lz - params.a * consts.E) ** 2 - consts.E**2


def _guard(params, consts, S, dth):
    if abs(dth) < EPS_DTH:
        raise ThetaHorizonEvaluation(f"Delta_theta={dth:.3e}")
    if S == 0.0 and consts.Lz != 0.0:
        raise PoleEvaluation("V diverges at a pole when Lz != 0")


def _F(params, consts, S, C, dth):
    """V / C^2.  The Lz term is written without a^2 so a = 0 works."""
    a2 = params.a**2
    Xi2 = params.Xi**2
    out = a2 * consts.q_mass + Xi2 * a2 * chi(params, consts) / dth
    if consts.Lz != 0.0:
        out += Xi2 * consts.Lz**2 / (dth * S * S)
    return out


def _G(params, consts, S, C, dth):
    """dV/dtheta divided by -2 C S."""
    a2 = params.a**2
    Xi2 = params.Xi**2
    out = a2 * consts.q_mass + Xi2 * a2 * chi(params, consts) / dth**2
    if consts.Lz != 0.0:
        out += Xi2 * consts.Lz**2 * (1.0 - params.L * a2 * C**4) / (S**4 * dth**2)
    return out


def _trig(params, theta):
    S, C, _ = sin_cos(theta)
    return S, C, 1.0 - params.L * params.a**2 * C * C


def potential_V(params, consts, theta):
    S, C, dth = _trig(params, theta)
    _guard(params, consts, S, dth)
    return C * C * _F(params, consts, S, C, dth)


def kinetic_T(params, consts, theta, vtheta, r):
    sc = eval_scalars(params, r, theta)
    if abs(sc.Delta_theta) < EPS_DTH:
        raise ThetaHorizonEvaluation(f"Delta_theta={sc.Delta_theta:.3e}")
    return sc.Sigma**2 * vtheta**2 / sc.Delta_theta


def potential_derivative(params, consts, theta):
    S, C, dth = _trig(params, theta)
    _guard(params, consts, S, dth)
    return -2.0 * C * S * _G(params, consts, S, C, dth)


def psi_chi(params, consts, theta):
    """(Psi, chi) with Psi = chi + Lz^2 / (a^2 S^2)."""
    S, _, _ = sin_cos(theta)
    x = chi(params, consts)
    if consts.Lz == 0.0:
        return x, x
    if S == 0.0 or params.a == 0.0:
        raise PoleEvaluation("Psi needs a > 0 and S != 0 when Lz != 0")
    return x + consts.Lz**2 / (params.a**2 * S * S), x


def default_domains(params, margin=MARGIN):
    """Connected theta intervals excluding poles and theta-horizons."""
    th = theta_horizons(params)
    if not th.present:
        return ((margin, math.pi - margin),)
    return (
        (margin, th.theta_minus - margin),
        (th.theta_minus + margin, th.theta_plus - margin),
        (th.theta_plus + margin, math.pi - margin),
    )


def _grid(lo, hi, step):
    n = max(2, int(math.ceil((hi - lo) / step)))
    return [lo + (hi - lo) * i / n for i in range(n + 1)]


def _sign_change_roots(f, grid):
    vals = [f(x) for x in grid]
    out = []
    for x0, x1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if v0 == 0.0:
            out.append(x0)
        elif v0 * v1 < 0.0:
            out.append(bisect_root(f, x0, x1, v0, xtol=THETA_TOL))
    if vals and vals[-1] == 0.0:
        out.append(grid[-1])
    return out


def _scan_until_stable(f, lo, hi):
    """Sign-change roots of f, doubling scan density until the count settles."""
    step = SCAN_STEP
    prev = _sign_change_roots(f, _grid(lo, hi, step))
    for _ in range(4):
        step /= 2.0
        cur = _sign_change_roots(f, _grid(lo, hi, step))
        if len(cur) == len(prev):
            return cur
        prev = cur
    return prev


def _limit_kind(value, threshold=1e12):
    if isinstance(value, str):
        return value
    if not math.isfinite(value) or abs(value) > threshold:
        return "+inf" if value > 0 else "-inf"
    return value


def _dominant_limit(params, consts, theta_edge, toward):
    """Limit of V approaching ``theta_edge`` from the side ``toward`` (+1/-1).

    Evaluated from the terms of V that dominate near the edge: at a pole
    the Lz^2 / S^2 term, at a theta-horizon the 1 / Delta_theta terms.
    """
    S, C, dth = _trig(params, theta_edge)
    Xi2 = params.Xi**2
    if S == 0.0:
        if consts.Lz != 0.0:
            dth_pole = 1.0 - params.L * params.a**2
            return "+inf" if Xi2 * consts.Lz**2 / dth_pole > 0 else "-inf"
        return potential_V(params, consts, theta_edge)
    # theta-horizon: sign of C^2 Xi^2 Psi a^2 / Delta_theta with Delta_theta -> 0
    psi, _ = psi_chi(params, consts, theta_edge)
    numer = C * C * Xi2 * params.a**2 * psi
    if numer == 0.0:
        return 0.0
    # d(Delta_theta)/dtheta = 2 L a^2 C S; Delta_theta has sign of that times toward
    side = sign(2.0 * params.L * params.a**2 * C * S) * toward
    return "+inf" if numer * side > 0 else "-inf"


def potential_profile(params, consts, domains=None, n_samples=257):
    domains = tuple(domains or default_domains(params))
    if not domains or any(hi <= lo for lo, hi in domains):
        raise DomainEmpty(f"empty theta domain {domains}")

    def F(x):
        S, C, dth = _trig(params, x)
        return _F(params, consts, S, C, dth)

    def G(x):
        S, C, dth = _trig(params, x)
        return _G(params, consts, S, C, dth)

    roots, extrema, samples = [], [], []
    for lo, hi in domains:
        for x in _grid(lo, hi, (hi - lo) / (n_samples - 1)):
            samples.append((x, potential_V(params, consts, x)))
        rts = _scan_until_stable(F, lo, hi)
        if lo < math.pi / 2 < hi:
            rts.append(math.pi / 2)
        roots.extend(rts)
        crit = _scan_until_stable(G, lo, hi)
        if lo < math.pi / 2 < hi:
            crit.append(math.pi / 2)
        for x in sorted(set(crit)):
            extrema.append((x, potential_V(params, consts, x), _extremum_kind(params, consts, x)))

    th = theta_horizons(params)
    pole_limits = (
        _limit_kind(_dominant_limit(params, consts, 0.0, +1)),
        _limit_kind(_dominant_limit(params, consts, math.pi, -1)),
    )
    cone_limits = None
    if th.present:
        cone_limits = tuple(
            (edge, side, _limit_kind(_dominant_limit(params, consts, edge, side)))
            for edge in (th.theta_minus, th.theta_plus)
            for side in (-1, +1)
        )
    return PotentialProfile(
        samples=tuple(samples),
        roots=tuple(sorted(set(roots))),
        extrema=tuple(sorted(extrema)),
        pole_limits=pole_limits,
        cone_limits=cone_limits,
        domains=domains,
    )


def _extremum_kind(params, consts, theta, h=1e-5):
    v0 = potential_V(params, consts, theta)
    vm = potential_V(params, consts, theta - h)
    vp = potential_V(params, consts, theta + h)
    d2 = vp - 2.0 * v0 + vm
    if d2 > 0:
        return "min"
    if d2 < 0:
        return "max"
    return "flat"


def equilibria(params, consts, domains=None):
    """(theta*, Q required, stability) at every extremum of V.

    A minimum of V is stable where Delta_theta > 0; inside the cones the
    kinetic term flips sign and so does stability.
    """
    prof = potential_profile(params, consts, domains)
    out = []
    for theta, v, kind in prof.extrema:
        _, _, dth = _trig(params, theta)
        stable = (kind == "min") == (dth > 0)
        out.append((theta, v, "stable" if stable else "unstable"))
    return out


def allowed_intervals(params, consts, domain):
    """Closed sub-intervals of ``domain`` where Theta(theta) >= 0."""
    lo, hi = domain

    def f(x):
        return colat_Theta(params, consts, x)

    edges = _scan_until_stable(f, lo, hi)
    pts = [lo, *edges, hi]
    out = []
    for x0, x1 in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (x0 + x1)
        if x1 > x0 and f(mid) >= 0.0:
            if out and abs(out[-1][1] - x0) < 1e-12:
                out[-1] = (out[-1][0], x1)
            else:
                out.append((x0, x1))
    return out


def _tie(q, v):
    return abs(q - v) < TIE_RTOL * (1.0 + abs(q))


def classify_motion(params, consts, domains=None):
    """One OrbitClass per connected component of the allowed theta set.

    The allowed set is {Theta >= 0}.  Degenerate single-point components
    (equilibria) are found from the extrema of V, since a scan cannot see
    a tangency.
    """
    domains = tuple(domains or default_domains(params))
    prof = potential_profile(params, consts, domains)
    th = theta_horizons(params)
    Q = consts.Q
    vmins = [v for _, v, k in prof.extrema if k == "min"]
    vmaxs = [v for _, v, k in prof.extrema if k == "max"]
    base_witness = {
        "Q": Q,
        "V_min": min(vmins) if vmins else None,
        "V_max": max(vmaxs) if vmaxs else None,
        "pole_limits": list(prof.pole_limits),
        "n_roots": len(prof.roots),
    }

    classes = []
    for dom in domains:
        lo, hi = dom
        in_cone = _trig(params, 0.5 * (lo + hi))[2] < 0
        comps = allowed_intervals(params, consts, dom)
        # tangencies: extrema with Q == V(theta*) not already covered
        for theta, v, kind in prof.extrema:
            if lo <= theta <= hi and _tie(Q, v) and not any(a - 1e-9 <= theta <= b + 1e-9 for a, b in comps):
                comps.append((theta, theta))
        comps.sort()
        for a, b in comps:
            classes.append(_tag_component(params, consts, prof, th, dom, in_cone, a, b, base_witness))
    if not classes:
        return [OrbitClass(FORBIDDEN, (), dict(base_witness), "no theta with Theta >= 0")]
    return classes


def _touches(x, edge, tol=1e-7):
    return abs(x - edge) <= tol


def _tag_component(params, consts, prof, th, dom, in_cone, a, b, witness):
    Q = consts.Q
    w = dict(witness)
    w["component"] = [a, b]
    half = math.pi / 2
    at_north = a <= MARGIN + 1e-9
    at_south = b >= math.pi - MARGIN - 1e-9
    near_h = th.present and any(_touches(x, e, 2 * MARGIN) for x in (a, b) for e in (th.theta_minus, th.theta_plus))

    if b - a < 1e-7:
        x = 0.5 * (a + b)
        kind = _extremum_kind(params, consts, x)
        if abs(x - half) < 1e-7:
            if kind == "min":
                return OrbitClass(EQ_STABLE, (x, x), w, "Q = 0 => stable equilibrium at pi/2")
            return OrbitClass(EQ_UNSTABLE, (x, x), w, "Q = 0 => unstable equilibrium at pi/2")
        return OrbitClass(OFF_EQ_STABLE, (x, x), w, "Q = Q_min => stable equilibrium at theta*")
    # Q sitting on an interior maximum: separatrix through an unstable point
    for x, v, kind in prof.extrema:
        if kind == "max" and a < x < b and _tie(Q, v):
            w["unstable_point"] = x
            return OrbitClass(ASYMPTOTIC, (a, b), w,
                              "Q = 0 => unstable equilibrium at pi/2 or asymptotic approach to the equator")
    if in_cone:
        if near_h:
            return OrbitClass(HORIZON_ASYMPTOTIC, (a, b), w, "inside cones: approaches theta-horizon")
        return OrbitClass(CONE_CONFINED, (a, b), w, "inside cones: bounded by V = Q")
    if at_north and at_south:
        return OrbitClass(FULL_RANGE, (a, b), w, "full range of motion between the poles")
    if at_north or at_south:
        return OrbitClass(POLE_REACHING, (a, b), w, "moves between V = Q and the poles")
    if near_h:
        return OrbitClass(HORIZON_ASYMPTOTIC, (a, b), w, "moves between V = Q and the theta-horizons")
    if a < half < b:
        return OrbitClass(SYMMETRIC, (a, b), w, "Q > 0 => oscillates symmetrically about pi/2")
    # edge sitting on pi/2 with V(pi/2) = Q = 0 at a maximum: asymptotic approach
    if (_touches(a, half) or _touches(b, half)) and _tie(Q, 0.0):
        return OrbitClass(ASYMPTOTIC, (a, b), w, "Q = 0 => asymptotically approaches the equator")
    return OrbitClass(WELL, (a, b), w, "Q_min < Q < 0 => oscillates in one potential well")


# ---------------------------------------------------------------------------
# lazy particles (E = Lz = 0)


def lazy_signs(params, qe_sign, r, theta):
    """Signs of (t', phi') for a lazy particle with sign(q e) = qe_sign."""
    sc = eval_scalars(params, r, theta)
    if abs(sc.Delta_r) < 1e-12 * max(1.0, r * r) or sc.Sigma == 0.0:
        raise ChartFailure(f"lazy rates undefined at r={r}, theta={theta}")
    denom = sign(sc.Sigma) * sign(sc.Delta_r)
    common = sign(sc.Xi) * qe_sign * sign(r) * denom
    t_sign = -sign(r * r - params.a**2) * common
    phi_sign = sign(params.a) * common
    return t_sign, phi_sign


def lazy_rates(params, q_charge, r, theta):
    """(t', phi') of a lazy particle from the reduced closed forms."""
    sc = eval_scalars(params, r, theta)
    f = sc.Xi * q_charge * params.e * r / (sc.Sigma * sc.Delta_r)
    return -(r * r - params.a**2) * f, params.a * f


REF_TABLE_PHI_ADS = {
    ("AdS", -1): -1, ("I+", -1): +1, ("I-", -1): -1, ("II", -1): +1,
    ("AdS", +1): +1, ("I+", +1): -1, ("I-", +1): +1, ("II", +1): -1,
}
REF_TABLE_T_ADS = {k: -v for k, v in REF_TABLE_PHI_ADS.items()}

# dS fast rotating: "dS" entries are (dS+, dS-) pairs read from the +-/-+ symbols
REF_TABLE_PHI_DS = {
    ("dS+", -1): -1, ("dS-", -1): +1, ("I", -1): +1, ("II", -1): -1, ("III+", -1): +1, ("III-", -1): -1,
    ("dS+", +1): +1, ("dS-", +1): -1, ("I", +1): -1, ("II", +1): +1, ("III+", +1): -1, ("III-", +1): +1,
}
REF_TABLE_T_DS = {
    ("dS+", -1): +1, ("dS-", -1): -1, ("I", -1): -1, ("II", -1): +1, ("III+", -1): -1, ("III-", -1): +1,
    ("dS+", +1): -1, ("dS-", +1): +1, ("I", +1): +1, ("II", +1): -1, ("III+", +1): +1, ("III-", +1): -1,
}


def _cell_radius(block, sub, a):
    """Representative radius inside a block, preferring r^2 > a^2."""
    lo, hi = block.lo, block.hi
    if sub == "+":
        lo = max(lo, 0.0)
    elif sub == "-":
        hi = min(hi, 0.0)
    if not lo < hi:
        return None
    lo_f = lo if math.isfinite(lo) else hi - 10.0 * max(1.0, abs(hi))
    hi_f = hi if math.isfinite(hi) else lo + 10.0 * max(1.0, abs(lo))
    # prefer the portion with |r| > a
    cands = []
    for seg in ((lo_f, min(hi_f, -a)), (max(lo_f, a), hi_f)):
        if seg[1] - seg[0] > 1e-9:
            cands.append(seg)
    if cands:
        seg = max(cands, key=lambda s: s[1] - s[0])
        return 0.5 * (seg[0] + seg[1])
    return 0.5 * (lo_f + hi_f)


def tabulated_lazy_signs(table_t, table_phi, cell, qe_sign, inside_omega, r2_lt_a2):
    """Tabulated (t', phi') signs for a cell with the stated negations applied.

    Every sign flips inside Omega; the t' sign also flips where r^2 < a^2.
    Missing entries come back as None.
    """
    omega = -1 if inside_omega else 1
    small = -1 if r2_lt_a2 else 1
    exp_t = table_t.get((cell, qe_sign))
    exp_p = table_phi.get((cell, qe_sign))
    return (
        None if exp_t is None else exp_t * omega * small,
        None if exp_p is None else exp_p * omega,
    )


def lazy_table(params, theta=math.pi / 2):
    """Block x sign(qe) grid of computed lazy-particle signs.

    Each row carries the reference tabulated entry, corrected for the stated
    negations (every sign inside Omega, the t' sign where r^2 < a^2), and a
    match flag.
    """
    chart = block_chart(params)
    fast_ds = params.Lambda > 0 and theta_horizons(params).present
    if params.Lambda < 0:
        cells = [("AdS", "AdS", None), ("I+", "I", "+"), ("I-", "I", "-"), ("II", "II", None)]
        tphi, tt = REF_TABLE_PHI_ADS, REF_TABLE_T_ADS
    else:
        cells = [("dS+", "dS+", None), ("I", "I", None), ("II", "II", None),
                 ("III+", "III", "+"), ("III-", "III", "-"), ("dS-", "dS-", None)]
        # slow rotation behaves like the AdS tables, which have no dS columns
        tphi, tt = (REF_TABLE_PHI_DS, REF_TABLE_T_DS) if fast_ds else ({}, {})
    rows = []
    for cell, label, sub in cells:
        r = _cell_radius(chart.block(label), sub, params.a)
        if r is None:
            continue
        for qe in (-1, +1):
            t_s, p_s = lazy_signs(params, qe, r, theta)
            sc = eval_scalars(params, r, theta)
            exp_t, exp_p = tabulated_lazy_signs(tt, tphi, cell, qe, sc.Sigma < 0, r * r < params.a**2)
            rows.append({
                "cell": cell,
                "qe_sign": qe,
                "r": r,
                "theta": theta,
                "inside_omega": sc.Sigma < 0,
                "r2_lt_a2": r * r < params.a**2,
                "phi_sign": p_s,
                "t_sign": t_s,
                "ref_phi_sign": exp_p,
                "ref_t_sign": exp_t,
                "phi_match": None if exp_p is None else exp_p == p_s,
                "t_match": None if exp_t is None else exp_t == t_s,
            })
    return rows


def root_condition(params, consts, theta):
    """X = Xi^2 / (-q Delta_theta - chi Xi^2) at ``theta`` with its bound a^2 / Lz^2.

    An off-equator zero of V at theta requires 0 < X < a^2 / Lz^2, with
    S^2 = Lz^2 X / a^2 there.
    """
    _, _, dth = _trig(params, theta)
    Xi2 = params.Xi**2
    denom = -consts.q_mass * dth - chi(params, consts) * Xi2
    X = Xi2 / denom if denom != 0.0 else math.inf
    bound = params.a**2 / consts.Lz**2 if consts.Lz != 0.0 else math.inf
    return X, bound, 0.0 < X < bound


def lazy_extra_roots(params, consts):
    """cos(theta) = +-sqrt((1 - Xi^3 E^2 / q) / (L a^2)) for Lz = 0, when real and in range.

    The formula is reproduced as written; compare with the bisected roots of
    ``potential_profile`` to see whether it holds.
    """
    L, a = params.L, params.a
    if consts.q_mass == 0.0 or L == 0.0 or a == 0.0:
        return ()
    c2 = (1.0 - params.Xi**3 * consts.E**2 / consts.q_mass) / (L * a * a)
    if not 0.0 < c2 < 1.0:
        return ()
    c = math.sqrt(c2)
    return (math.acos(c), math.acos(-c))


def _gamma_perp_norm_scaled(params, consts, theta):
    # Sigma <gamma_perp, gamma_perp> = K - q a^2 C^2
    _, C, _ = sin_cos(theta)
    return consts.K - consts.q_mass * params.a**2 * C * C


def k_range_census(params, states, q_charge=0.0):
    """Check the tabulated K ranges against constants computed from ``states``.

    Each state is bucketed by sign(q), inside/outside Omega and
    inside/outside the theta-cones.  Claims checked per bucket:

    outside cones: q < 0 => K >= q a^2 cos^2(theta_edge) (a^2 read for a;
    the literal ``K >= q a`` is tallied alongside), q > 0 => K >= 0;
    inside cones: q < 0 => K < q a^2 cos^2(theta_edge), q > 0 => K <= q a^2.
    theta_edge is the theta-horizon when present, else the pole.
    """
    from .integrals import constants_from_state

    th = theta_horizons(params)
    c_edge2 = 1.0 / (params.L * params.a**2) if th.present else 1.0
    buckets = {}
    for st in states:
        consts = constants_from_state(params, q_charge, st)
        q, K = consts.q_mass, consts.K
        sc = eval_scalars(params, st.r, st.theta)
        key = (
            "q<0" if q < 0 else ("q>0" if q > 0 else "q=0"),
            "inside_omega" if sc.Sigma < 0 else "outside_omega",
            "inside_cones" if sc.Delta_theta < 0 else "outside_cones",
        )
        b = buckets.setdefault(key, {"n": 0, "violations": 0, "literal_violations": 0})
        b["n"] += 1
        tol = 1e-12 * max(1.0, abs(K), abs(q) * params.a**2)
        inside_cone = key[2] == "inside_cones"
        ok, literal_ok = True, True
        if q < 0:
            bound = q * params.a**2 * c_edge2
            ok = K < bound + tol if inside_cone else K >= bound - tol
            if not inside_cone:
                literal_ok = K >= q * params.a - tol
        elif q > 0:
            ok = K <= q * params.a**2 + tol if inside_cone else K >= -tol
        b["violations"] += 0 if ok else 1
        b["literal_violations"] += 0 if literal_ok else 1
    return {"|".join(k): v for k, v in sorted(buckets.items())}


def psi_cone_census(params, samples):
    """Sign census of Psi inside the cones over (theta, E, Lz) samples.

    Returns counts of positive, negative and zero Psi values; a zero would
    contradict the discriminant argument.
    """
    out = {"positive": 0, "negative": 0, "zero": 0, "skipped": 0}
    for theta, E, Lz in samples:
        _, _, dth = _trig(params, theta)
        if dth >= 0.0:
            out["skipped"] += 1
            continue
        consts = MotionConstantsLite(E, Lz)
        psi, _ = psi_chi(params, consts, theta)
        out["positive" if psi > 0 else ("negative" if psi < 0 else "zero")] += 1
    return out


@dataclass(frozen=True)
class MotionConstantsLite:
    """Just (E, Lz), enough for chi and Psi."""

    E: float
    Lz: float
