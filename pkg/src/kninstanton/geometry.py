"""
Pointwise geometry of the Wick-rotated Kerr-Newman-(A)dS metric.

Line element in Boyer-Lindquist coordinates (r, t, theta, phi)::

    ds^2 = Sigma/Delta_r dr^2 + Sigma/Delta_theta dtheta^2
         + S^2 Delta_theta / (Xi^2 Sigma) (a dt + (r^2 - a^2) dphi)^2
         + Delta_r / (Xi^2 Sigma) (dt - a S^2 dphi)^2

with Sigma = r^2 - a^2 C^2, Delta_r = (r^2 - a^2)(1 - L r^2) - 2 M r - e^2,
Delta_theta = 1 - L a^2 C^2, Xi = 1 - L a^2 and L = Lambda / 3.
Units are geometric (G = c = 1) and angles are radians.
"""

import math
from dataclasses import dataclass

from ._numeric import rel_diff
from .errors import ChartFailure, InvalidParameters, SingularityHit

EPS_CHART = 1e-10
EPS_DEG = 1e-9
EPS_SING = 1e-10

RIEMANNIAN = "Riemannian"
LORENTZIAN = "Lorentzian"
TWO_TWO = "TwoTwo"
DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class InstantonParams:
    """Solution parameters (M, a, e, Lambda).

    ``L`` and ``Xi`` are derived on access so they can never go stale.
    """

    M: float
    a: float
    e: float
    Lambda: float

    def __post_init__(self):
        for name in ("M", "a", "e", "Lambda"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParameters(f"{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.a < 0:
            raise InvalidParameters("a must be >= 0 (reflect phi for negative spin)")

    @property
    def L(self):
        return self.Lambda / 3.0

    @property
    def Xi(self):
        return 1.0 - self.L * self.a * self.a

    def to_dict(self):
        return {"M": self.M, "a": self.a, "e": self.e, "Lambda": self.Lambda}


@dataclass(frozen=True)
class ScalarBundle:
    r: float
    theta: float
    S: float
    C: float
    Sigma: float
    Delta_r: float
    Delta_theta: float
    Xi: float
    at_pole: bool


@dataclass(frozen=True)
class MetricBundle:
    g_rr: float
    g_thth: float
    g_tt: float
    g_tphi: float
    g_phiphi: float
    det_tphi: float
    inv_rr: float = None
    inv_thth: float = None
    inv_tt: float = None
    inv_tphi: float = None
    inv_phiphi: float = None


@dataclass(frozen=True)
class SignatureReport:
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    klass: str
    negative_count: int
    inside_omega: bool
    inside_cone: bool

    @property
    def eigenvalues(self):
        return (self.lambda1, self.lambda2, self.lambda3, self.lambda4)


@dataclass(frozen=True)
class PotentialBundle:
    A_t: float
    A_phi: float


@dataclass(frozen=True)
class FrameProducts:
    """Six frame inner products, by contraction and by closed form.

    Order: <V,d_phi>, <V,d_t>, <W,d_phi>, <W,d_t>, <V,V>, <W,W>.
    """

    contraction: tuple
    closed_form: tuple
    max_rel_discrepancy: float


def sin_cos(theta):
    """(S, C, at_pole) with exact values at the poles."""
    if theta == 0.0:
        return 0.0, 1.0, True
    if theta == math.pi:
        return 0.0, -1.0, True
    return math.sin(theta), math.cos(theta), False


def delta_r(params, r):
    L, a = params.L, params.a
    return (r * r - a * a) * (1.0 - L * r * r) - 2.0 * params.M * r - params.e * params.e


def delta_r_prime(params, r):
    L, a = params.L, params.a
    return 2.0 * r * (1.0 - L * r * r) - 2.0 * L * r * (r * r - a * a) - 2.0 * params.M


def eval_scalars(params, r, theta):
    if not 0.0 <= theta <= math.pi:
        raise InvalidParameters(f"theta={theta} outside [0, pi]")
    S, C, at_pole = sin_cos(theta)
    a2 = params.a * params.a
    return ScalarBundle(
        r=r,
        theta=theta,
        S=S,
        C=C,
        Sigma=r * r - a2 * C * C,
        Delta_r=delta_r(params, r),
        Delta_theta=1.0 - params.L * a2 * C * C,
        Xi=params.Xi,
        at_pole=at_pole,
    )


def chart_eps(r):
    return EPS_CHART * max(1.0, r * r)


def check_chart(sc):
    """Raise ChartFailure where the Boyer-Lindquist chart is unusable."""
    eps = chart_eps(sc.r)
    if abs(sc.Xi) < EPS_CHART:
        raise ChartFailure("Xi = 1 - L a^2 vanishes")
    if sc.at_pole or abs(sc.S) < EPS_CHART:
        raise ChartFailure(f"pole: theta={sc.theta}")
    if abs(sc.Sigma) < eps:
        raise SingularityHit(f"Sigma={sc.Sigma:.3e} at r={sc.r}, theta={sc.theta}")
    if abs(sc.Delta_r) < eps:
        raise ChartFailure(f"r-horizon: Delta_r={sc.Delta_r:.3e} at r={sc.r}")
    if abs(sc.Delta_theta) < EPS_CHART:
        raise ChartFailure(f"theta-horizon: Delta_theta={sc.Delta_theta:.3e} at theta={sc.theta}")


def _covariant_parts(params, sc):
    a = params.a
    S2 = sc.S * sc.S
    w = 1.0 / (sc.Xi * sc.Xi * sc.Sigma)
    rr = sc.r * sc.r - a * a
    g_tt = (a * a * S2 * sc.Delta_theta + sc.Delta_r) * w
    g_tphi = a * S2 * (sc.Delta_theta * rr - sc.Delta_r) * w
    g_phiphi = S2 * (sc.Delta_theta * rr * rr + sc.Delta_r * a * a * S2) * w
    return g_tt, g_tphi, g_phiphi


def metric_covariant(params, r, theta, _sc=None):
    sc = _sc or eval_scalars(params, r, theta)
    check_chart(sc)
    g_tt, g_tphi, g_phiphi = _covariant_parts(params, sc)
    return MetricBundle(
        g_rr=sc.Sigma / sc.Delta_r,
        g_thth=sc.Sigma / sc.Delta_theta,
        g_tt=g_tt,
        g_tphi=g_tphi,
        g_phiphi=g_phiphi,
        det_tphi=g_tt * g_phiphi - g_tphi * g_tphi,
    )


def metric_contravariant(params, r, theta, _sc=None):
    """Full metric bundle including the inverse of every block."""
    cov = metric_covariant(params, r, theta, _sc)
    d = cov.det_tphi
    if d == 0.0:
        raise ChartFailure("singular (t, phi) block")
    return MetricBundle(
        g_rr=cov.g_rr,
        g_thth=cov.g_thth,
        g_tt=cov.g_tt,
        g_tphi=cov.g_tphi,
        g_phiphi=cov.g_phiphi,
        det_tphi=cov.det_tphi,
        inv_rr=1.0 / cov.g_rr,
        inv_thth=1.0 / cov.g_thth,
        inv_tt=cov.g_phiphi / d,
        inv_tphi=-cov.g_tphi / d,
        inv_phiphi=cov.g_tt / d,
    )


def det_tphi_closed(params, r, theta):
    """S^2 Delta_theta Delta_r / Xi^4, the (t, phi) block determinant."""
    sc = eval_scalars(params, r, theta)
    return sc.S**2 * sc.Delta_theta * sc.Delta_r / sc.Xi**4


def maxwell_potential(params, r, theta):
    sc = eval_scalars(params, r, theta)
    if abs(sc.Sigma) < EPS_SING * max(1.0, r * r):
        raise SingularityHit(f"Sigma={sc.Sigma:.3e} at r={r}, theta={theta}")
    f = params.e * r / (sc.Sigma * sc.Xi)
    return PotentialBundle(A_t=-f, A_phi=f * params.a * sc.S * sc.S)


def signature_at(params, r, theta):
    sc = eval_scalars(params, r, theta)
    g = metric_covariant(params, r, theta, sc)
    det = sc.S**2 * sc.Delta_theta * sc.Delta_r / sc.Xi**4
    tr = g.g_phiphi + g.g_tt
    root = math.sqrt(g.g_phiphi**2 - 2.0 * g.g_phiphi * g.g_tt + g.g_tt**2 + 4.0 * g.g_tphi**2)
    # the smaller-magnitude eigenvalue comes from the determinant to avoid cancellation
    if tr >= 0.0:
        lam3 = 0.5 * (tr + root)
        lam4 = det / lam3 if lam3 != 0.0 else 0.0
    else:
        lam4 = 0.5 * (tr - root)
        lam3 = det / lam4
    lams = (g.g_thth, g.g_rr, lam3, lam4)
    scale = max(abs(x) for x in lams)
    if any(abs(x) < EPS_DEG * scale for x in lams):
        klass = DEGENERATE
        neg = sum(1 for x in lams if x < -EPS_DEG * scale)
    else:
        neg = sum(1 for x in lams if x < 0)
        # definite of either sign is a Riemannian metric up to overall sign
        klass = {0: RIEMANNIAN, 4: RIEMANNIAN, 1: LORENTZIAN, 3: LORENTZIAN}.get(neg, TWO_TWO)
    return SignatureReport(
        lambda1=lams[0],
        lambda2=lams[1],
        lambda3=lam3,
        lambda4=lam4,
        klass=klass,
        negative_count=neg,
        inside_omega=sc.Sigma < 0,
        inside_cone=sc.Delta_theta < 0,
    )


def frame_inner_products(params, r, theta):
    """Inner products of V = (r^2-a^2) d_t - a d_phi and W = d_phi + a S^2 d_t."""
    sc = eval_scalars(params, r, theta)
    g = metric_covariant(params, r, theta, sc)
    a = params.a
    S2 = sc.S * sc.S
    rr = r * r - a * a
    Xi2 = sc.Xi * sc.Xi

    # V and W components in (t, phi)
    Vt, Vp = rr, -a
    Wt, Wp = a * S2, 1.0

    def dot(ut, up, vt, vp):
        terms = (ut * vt * g.g_tt, (ut * vp + up * vt) * g.g_tphi, up * vp * g.g_phiphi)
        return sum(terms), sum(abs(x) for x in terms)

    pairs = [
        dot(Vt, Vp, 0.0, 1.0),
        dot(Vt, Vp, 1.0, 0.0),
        dot(Wt, Wp, 0.0, 1.0),
        dot(Wt, Wp, 1.0, 0.0),
        dot(Vt, Vp, Vt, Vp),
        dot(Wt, Wp, Wt, Wp),
    ]
    closed = (
        -a * S2 * sc.Delta_r / Xi2,
        sc.Delta_r / Xi2,
        S2 * rr * sc.Delta_theta / Xi2,
        a * S2 * sc.Delta_theta / Xi2,
        sc.Delta_r * sc.Sigma / Xi2,
        S2 * sc.Delta_theta * sc.Sigma / Xi2,
    )
    contraction = tuple(v for v, _ in pairs)
    worst = max(rel_diff(v, c, s) for (v, s), c in zip(pairs, closed))
    return FrameProducts(contraction=contraction, closed_form=closed, max_rel_discrepancy=worst)


def positivity_combination(params, r, theta):
    """Both sides of (r^2-a^2)^2/(a^2 S^2) + a^2 S^2 + 2(r^2-a^2) = Sigma^2/(a^2 S^2).

    Requires a > 0 and S != 0.
    """
    sc = eval_scalars(params, r, theta)
    a2S2 = params.a**2 * sc.S**2
    if a2S2 == 0.0:
        raise ChartFailure("positivity combination needs a > 0 away from the poles")
    rr = r * r - params.a**2
    terms = (rr * rr / a2S2, a2S2, 2.0 * rr)
    return sum(terms), sc.Sigma**2 / a2S2, sum(abs(x) for x in terms)
