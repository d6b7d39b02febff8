"""
Roots of Delta_r, the radial block chart, theta-horizons and the
singularity locus.

Delta_r is the quartic ``-L r^4 + (L a^2 + 1) r^2 - 2 M r - (a^2 + e^2)``.
Real roots come from the eigenvalues of its companion matrix, polished
with Newton steps on Delta_r itself.  The discriminant sign sequence
(D1, D2, D3) is an independent prediction of the real-root count.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import QuarticDegenerate, UnchartedStructure
from .geometry import delta_r, delta_r_prime, eval_scalars

EPS_ROOT = 1e-12
EPS_IMAG = 1e-8
CLUSTER_TOL = 1e-6
DISC_GUARD = 1e-8
# far/near root ratio beyond which the quartic is solved as quadratic + far pair
SPLIT_RATIO = 1e6

FOUR_REAL = "FourReal"
TWO_REAL = "TwoRealTwoComplex"
NO_REAL = "NoReal"
DEGENERATE = "Degenerate"
QUADRATIC = "QuadraticCase"

ADS_LABELS = ("II", "I", "AdS")
DS_LABELS = ("dS-", "III", "II", "I", "dS+")

INSIDE = "Inside"
ON = "On"
OUTSIDE = "Outside"


@dataclass(frozen=True)
class DiscriminantTriple:
    D1: float
    D2: float
    D3: float
    predicted_real_count: int
    near_degenerate: bool
    D3_scale: float


@dataclass(frozen=True)
class RootStructure:
    tag: str
    roots: tuple
    multiplicities: tuple
    complex_roots: tuple = ()

    @property
    def real_count(self):
        return sum(self.multiplicities)


@dataclass(frozen=True)
class ThetaHorizons:
    a_crit: float = None
    theta_minus: float = None
    theta_plus: float = None

    @property
    def present(self):
        return self.theta_minus is not None


@dataclass(frozen=True)
class Block:
    lo: float
    hi: float
    label: str = None

    def contains(self, r):
        return self.lo < r < self.hi


@dataclass(frozen=True)
class BlockChart:
    roots: RootStructure
    blocks: tuple
    theta_horizons: ThetaHorizons
    note: str = ""

    @property
    def a_crit(self):
        return self.theta_horizons.a_crit

    def block_of(self, r):
        """Label of the block containing ``r``; None on a root."""
        for b in self.blocks:
            if b.contains(r):
                return b.label
        return None

    def block(self, label):
        for b in self.blocks:
            if b.label == label:
                return b
        raise KeyError(label)


@dataclass(frozen=True)
class SingularityReport:
    location: str
    Sigma: float
    radial_extent: tuple = field(default=(0.0, 0.0))


def quartic_coefficients(params):
    """Coefficients of Delta_r, highest power first."""
    L, a, e = params.L, params.a, params.e
    return (-L, 0.0, L * a * a + 1.0, -2.0 * params.M, -(a * a + e * e))


def _d3_terms(params):
    L, M, a, e = params.L, params.M, params.a, params.e
    c = L * a * a + 1.0
    k = -a * a - e * e
    return (
        -256.0 * L**3 * k**3,
        -128.0 * L**2 * c**2 * k**2,
        576.0 * L**2 * c * M**2 * k,
        -432.0 * L**2 * M**4,
        -16.0 * L * c**4 * k,
        16.0 * L * c**3 * M**2,
    )


def discriminants(params):
    """Discriminant sequence of Delta_r with its real-root prediction.

    D3 < 0 predicts two real roots; D3 > 0 predicts four when D1 > 0 and
    D2 > 0, none otherwise.  ``near_degenerate`` marks |D3| inside the
    guard band relative to the size of its terms.
    """
    L, M, a, e = params.L, params.M, params.a, params.e
    if L == 0.0:
        raise QuarticDegenerate("Delta_r is quadratic when Lambda = 0")
    c = L * a * a + 1.0
    k = -a * a - e * e
    D1 = 8.0 * L * c
    D2 = 16.0 * L**2 * c * k - 72.0 * L**2 * M**2 + 4.0 * L * c**3
    terms = _d3_terms(params)
    D3 = sum(terms)
    scale = sum(abs(t) for t in terms)
    if D3 < 0:
        count = 2
    elif D3 > 0 and D1 > 0 and D2 > 0:
        count = 4
    else:
        count = 0
    return DiscriminantTriple(D1, D2, D3, count, abs(D3) < DISC_GUARD * scale, scale)


def _polish(params, r, iters=60):
    for _ in range(iters):
        f = delta_r(params, r)
        df = delta_r_prime(params, r)
        if df == 0.0 or f == 0.0 or not (math.isfinite(f) and math.isfinite(df)):
            break
        step = f / df
        r_new = r - step
        if abs(step) <= EPS_ROOT * max(1.0, abs(r)):
            r = r_new
            break
        if abs(delta_r(params, r_new)) > abs(f) and abs(step) < 1e-8 * max(1.0, abs(r)):
            # stalled on round-off near a multiple root
            break
        r = r_new
    return r


def residual_scale(params, r):
    # (|L| r^2) r^2 keeps far roots at tiny L in range
    return 1.0 + abs(params.L) * r * r * r * r + abs(2.0 * params.M * r) + params.a**2 + params.e**2


def _cluster(values):
    values = sorted(values)
    roots, mult = [], []
    for v in values:
        if roots and abs(v - roots[-1]) <= CLUSTER_TOL * max(1.0, abs(v)):
            n = mult[-1]
            roots[-1] = (roots[-1] * n + v) / (n + 1)
            mult[-1] = n + 1
        else:
            roots.append(v)
            mult.append(1)
    return roots, mult


def companion_matrix(coeffs):
    """Frobenius companion matrix of the polynomial ``coeffs`` (highest first)."""
    c = np.asarray(coeffs, dtype=float)
    c = c / c[0]
    n = len(c) - 1
    comp = np.zeros((n, n))
    comp[0, :] = -c[1:]
    comp[1:, :-1] = np.eye(n - 1)
    return comp


def _split_roots(params):
    """Near pair from the quadratic part and far pair +-sqrt(c/L), or None.

    Used when |L| is so small that the far roots dwarf the near ones: the
    companion eigenvalues of the near pair are then pure round-off.
    """
    L, M, a, e = params.L, params.M, params.a, params.e
    c = L * a * a + 1.0
    near_scale = abs(M) + math.sqrt(M * M + a * a + e * e) + 1.0
    if not abs(L) * (SPLIT_RATIO * near_scale) ** 2 < abs(c):
        return None
    near = np.roots([c, -2.0 * M, -(a * a + e * e)]).astype(complex)
    with np.errstate(over="ignore"):
        far = np.sqrt(complex(c) / L)
    if not np.isfinite(far):
        raise QuarticDegenerate(f"far roots of Delta_r overflow for L={L:.3e}")
    return np.concatenate([near, [far, -far]])


def delta_r_roots(params):
    L = params.L
    if L == 0.0:
        # (r - M)^2 = M^2 + a^2 + e^2
        disc = params.M**2 + params.a**2 + params.e**2
        s = math.sqrt(disc)
        if s == 0.0:
            return RootStructure(QUADRATIC, (0.0,), (2,))
        return RootStructure(QUADRATIC, (params.M - s, params.M + s), (1, 1))

    split = _split_roots(params)
    eig = split if split is not None else np.linalg.eigvals(companion_matrix(quartic_coefficients(params)))
    real, cplx = [], []
    for z in eig:
        if abs(z.imag) <= EPS_IMAG * (1.0 + abs(z)):
            real.append(_polish(params, float(z.real)))
        elif z.imag > 0:
            cplx.append(complex(z))
    roots, mult = _cluster(real)
    n_real = len(real)
    if any(m > 1 for m in mult):
        tag = DEGENERATE
    elif n_real == 4:
        tag = FOUR_REAL
    elif n_real == 2:
        tag = TWO_REAL
    elif n_real == 0:
        tag = NO_REAL
    else:
        tag = DEGENERATE
    return RootStructure(tag, tuple(roots), tuple(mult), tuple(sorted(cplx, key=lambda z: z.real)))


def theta_horizons(params):
    """Critical spin and theta-horizon angles, cos^2(theta) = 1 / (L a^2)."""
    if params.Lambda <= 0.0:
        return ThetaHorizons()
    L = params.L
    a_crit = math.sqrt(3.0 / params.Lambda)
    if not params.a > a_crit:
        return ThetaHorizons(a_crit=a_crit)
    theta_minus = math.acos(1.0 / (params.a * math.sqrt(L)))
    return ThetaHorizons(a_crit=a_crit, theta_minus=theta_minus, theta_plus=math.pi - theta_minus)


def _intervals(edges, labels):
    bounds = [-math.inf, *edges, math.inf]
    return tuple(Block(lo, hi, lab) for lo, hi, lab in zip(bounds[:-1], bounds[1:], labels))


def block_chart(params):
    """Radial blocks labeled positionally from the sorted real roots.

    Two distinct roots with Lambda <= 0 use the AdS table, four with
    Lambda > 0 the dS table.  Anything else raises UnchartedStructure
    carrying an unlabeled chart.
    """
    rs = delta_r_roots(params)
    th = theta_horizons(params)
    roots = rs.roots
    if params.Lambda <= 0.0 and len(roots) == 2 and rs.real_count == 2:
        return BlockChart(rs, _intervals(roots, ADS_LABELS), th)
    if params.Lambda > 0.0 and len(roots) == 4:
        return BlockChart(rs, _intervals(roots, DS_LABELS), th)

    if not roots:
        note = "no horizons: Delta_r has no real roots"
    else:
        note = f"{len(roots)} distinct real roots match neither block table"
    chart = BlockChart(rs, _intervals(roots, [None] * (len(roots) + 1)), th, note)
    raise UnchartedStructure(note, roots, chart)


def singularity_test(params, r, theta):
    """Locate (r, theta) relative to Omega = {Sigma < 0}."""
    sc = eval_scalars(params, r, theta)
    scale = r * r + params.a**2 * sc.C**2
    if abs(sc.Sigma) <= 1e-10 * scale or sc.Sigma == 0.0:
        loc = ON
    elif sc.Sigma < 0:
        loc = INSIDE
    else:
        loc = OUTSIDE
    return SingularityReport(loc, sc.Sigma, (-params.a, params.a))


def negative_root_count(params):
    rs = delta_r_roots(params)
    return sum(m for r, m in zip(rs.roots, rs.multiplicities) if r < 0)


TABULATED_ADS_SIGNATURE = {
    # (block, inside_omega) -> class as listed in the prose
    ("AdS", False): "Riemannian",
    ("II", False): "Riemannian",
    ("I", False): "Lorentzian",
    ("I", True): "Lorentzian",
    ("AdS", True): "TwoTwo",
    ("II", True): "TwoTwo",
}


def tabulated_signature_claim(params, r, theta, chart=None):
    """Signature class the prose block lists assign to (r, theta).

    Returns None where the lists are silent.  Used only for diagnostics;
    ``geometry.signature_at`` classifies from eigenvalue signs.
    """
    chart = chart or block_chart(params)
    block = chart.block_of(r)
    sc = eval_scalars(params, r, theta)
    omega = sc.Sigma < 0
    cone = sc.Delta_theta < 0
    if params.Lambda < 0:
        return TABULATED_ADS_SIGNATURE.get((block, omega))
    outer = block in ("II", "dS-", "dS+")
    inner = block in ("I", "III")
    if (omega and cone and outer) or (not omega and not cone and inner):
        return "Riemannian"
    if (not cone and outer) or (cone and inner):
        return "Lorentzian"
    if (omega and not cone and inner) or (not omega and cone and outer):
        return "TwoTwo"
    return None
