"""
Geodesic integration in two independent formulations.

``integrate_mino`` integrates the separated first-integral equations in the
Mino parameter (dl = ds / Sigma) in second-order form, r'' = R'/2 and
theta'' = Theta'/2.  ``integrate_hamiltonian`` integrates the canonical
equations of H = 1/2 g^ab pi_a pi_b, pi = p + q A, in the affine parameter
s, from closed-form derivatives of the metric and potential.  Both stop at
the same affine length so their end states can be compared.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import EventStop, IntegrationError, InvalidParameters, MaxSteps, StepFailure
from .geometry import check_chart, eval_scalars
from .integrals import TangentState, canonical_momenta, constants_batch, constants_from_state

MINO_MODE = "MinoFirstIntegral"
HAMILTONIAN_MODE = "CanonicalHamiltonian"

R_TURN = "RTurning"
THETA_TURN = "ThetaTurning"
HORIZON = "HorizonApproach"
THETA_HORIZON = "ThetaHorizonApproach"
SINGULARITY = "SingularityApproach"
DOMAIN_EXIT = "DomainExit"

CONSTANT_NAMES = ("q_mass", "E", "Lz", "K")
SAMPLE_COLUMNS = ("param", "s", "r", "theta", "phi", "t", "vr", "vtheta", "vphi", "vt")


@dataclass(frozen=True)
class IntegratorOptions:
    mode: str = MINO_MODE
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 500_000
    s_span: float = 1000.0
    events: bool = True
    raise_on_stop: bool = False

    def __post_init__(self):
        if self.mode not in (MINO_MODE, HAMILTONIAN_MODE):
            raise InvalidParameters(f"unknown mode {self.mode!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise InvalidParameters("tolerances must be positive")
        if not (math.isfinite(self.s_span) and self.s_span != 0.0):
            raise InvalidParameters("s_span must be finite and nonzero")
        if self.max_steps <= 0:
            raise InvalidParameters("max_steps must be positive")


@dataclass(frozen=True)
class Event:
    param: float
    s: float
    kind: str
    r: float
    theta: float


@dataclass(frozen=True)
class TrajectoryRecord:
    """Accepted steps of one integration.

    ``samples`` has the columns of ``SAMPLE_COLUMNS``; ``drift`` has one
    column per entry of ``CONSTANT_NAMES``, each the deviation from the
    initial value divided by max(|initial|, initial term scale).
    """

    mode: str
    samples: np.ndarray
    drift: np.ndarray
    events: tuple
    status: str
    constants: object
    raw: np.ndarray = field(repr=False)
    dense: np.ndarray = field(repr=False)
    constraint_residuals: np.ndarray = None
    nfev: int = 0

    @property
    def final_state(self):
        row = self.samples[-1]
        return TangentState(*(float(x) for x in row[2:]))

    @property
    def final_s(self):
        return float(self.samples[-1, 1])

    def max_drift(self):
        return {k: float(np.max(self.drift[:, i])) for i, k in enumerate(CONSTANT_NAMES)}


def _pack(params, consts):
    return [
        params.M, params.a, params.e, params.L, params.Xi,
        consts.q_charge, consts.q_mass, consts.E, consts.Lz, consts.K,
    ]


def _rates(mode, ys, p):
    rhs = kernels.mino_rhs if mode == kernels.MINO else kernels.ham_rhs
    out = np.empty_like(ys)
    buf = [0.0] * ys.shape[1]
    for k in range(ys.shape[0]):
        rhs(ys[k].tolist(), p, buf)
        out[k] = buf
    return out


def _to_samples(mode, xs, ys, p):
    """Convert raw kernel states to (param, s, r, theta, phi, t, vr, vtheta, vphi, vt)."""
    f = _rates(mode, ys, p)
    n = ys.shape[0]
    out = np.empty((n, len(SAMPLE_COLUMNS)))
    out[:, 0] = xs
    if mode == kernels.MINO:
        r, th = ys[:, 0], ys[:, 2]
        a = p[1]
        sig = r * r - a * a * np.cos(th) ** 2
        out[:, 1] = ys[:, 6]
        out[:, 2] = r
        out[:, 3] = th
        out[:, 4] = ys[:, 4]
        out[:, 5] = ys[:, 5]
        out[:, 6] = ys[:, 1] / sig
        out[:, 7] = ys[:, 3] / sig
        out[:, 8] = f[:, 4] / sig
        out[:, 9] = f[:, 5] / sig
    else:
        out[:, 1] = xs
        out[:, 2] = ys[:, 0]
        out[:, 3] = ys[:, 1]
        out[:, 4] = ys[:, 2]
        out[:, 5] = ys[:, 3]
        out[:, 6] = f[:, 0]
        out[:, 7] = f[:, 1]
        out[:, 8] = f[:, 2]
        out[:, 9] = f[:, 3]
    return out


def _drift(params, q_charge, samples):
    vals, scales = constants_batch(params, q_charge, *(samples[:, i] for i in range(2, 10) if i not in (4, 5)))
    out = np.empty((samples.shape[0], len(CONSTANT_NAMES)))
    for j, k in enumerate(CONSTANT_NAMES):
        v0 = vals[k][0]
        denom = max(abs(v0), float(scales[k][0]), 1e-300)
        out[:, j] = np.abs(vals[k] - v0) / denom
    return out


def _mino_residuals(params, consts, ys):
    r, rd, th, thd = ys[:, 0], ys[:, 1], ys[:, 2], ys[:, 3]
    a, e, L, Xi, M = params.a, params.e, params.L, params.Xi, params.M
    S, C = np.sin(th), np.cos(th)
    dr = (r * r - a * a) * (1.0 - L * r * r) - 2.0 * M * r - e * e
    P = consts.q_charge * e * r / Xi + a * consts.Lz + (r * r - a * a) * consts.E
    R = dr * (consts.q_mass * r * r - consts.K) - Xi**2 * P * P
    D = consts.Lz - a * consts.E * S * S
    Th = (1.0 - L * a * a * C * C) * (consts.K - consts.q_mass * a * a * C * C) - Xi**2 * D * D / (S * S)
    return np.column_stack((np.abs(rd * rd - R) / (1.0 + np.abs(R)), np.abs(thd * thd - Th) / (1.0 + np.abs(Th))))


def _status_event(status_code, mode, xs, ys):
    name = kernels.STATUS_NAMES.get(status_code, "StepFailure")
    if status_code in (1, 2, 6, 7):
        ti = 2 if mode == kernels.MINO else 1
        s = ys[-1, 6] if mode == kernels.MINO else xs[-1]
        return name, Event(float(xs[-1]), float(s), name, float(ys[-1, 0]), float(ys[-1, ti]))
    return name, None


def _finish(mode_name, mode, params, consts, q_charge, status_code, xs, ys, dense, nfev, opts):
    p = _pack(params, consts)
    samples = _to_samples(mode, xs, ys, p)
    drift = _drift(params, q_charge, samples)
    resid = _mino_residuals(params, consts, ys) if mode == kernels.MINO else None
    status, term = _status_event(status_code, mode, xs, ys)
    rec = TrajectoryRecord(
        mode=mode_name,
        samples=samples,
        drift=drift,
        events=(),
        status=status,
        constants=consts,
        raw=ys,
        dense=dense,
        constraint_residuals=resid,
        nfev=int(nfev),
    )
    events = list(event_scan(rec, params)) if opts.events else []
    if term is not None:
        events.append(term)
    rec = TrajectoryRecord(**{**rec.__dict__, "events": tuple(events)})
    if opts.raise_on_stop and status != "ok":
        exc = {"MaxSteps": MaxSteps, "StepFailure": StepFailure}.get(status, EventStop)
        err = exc(f"integration stopped: {status}")
        err.record = rec
        raise err
    return rec


def _initial_checks(params, init):
    check_chart(eval_scalars(params, init.r, init.theta))


def mino_state(params, init):
    """Mino-form state vector [r, dr/dl, theta, dtheta/dl, phi, t, s]."""
    sc = eval_scalars(params, init.r, init.theta)
    return [init.r, sc.Sigma * init.vr, init.theta, sc.Sigma * init.vtheta, init.phi, init.t, 0.0]


def integrate_mino(params, q_charge, init, opts=None, consts=None, s_target=None, y0=None):
    """Integrate in Mino form until the co-integrated affine parameter reaches ``opts.s_span``."""
    opts = opts or IntegratorOptions()
    _initial_checks(params, init)
    consts = consts or constants_from_state(params, q_charge, init)
    y0 = list(y0) if y0 is not None else mino_state(params, init)
    s_target = opts.s_span if s_target is None else s_target
    sig0 = eval_scalars(params, init.r, init.theta).Sigma
    # s grows along l when Sigma > 0; pick the l direction that moves s toward the target
    direction = math.copysign(1.0, (s_target - y0[6]) * sig0)
    status, xs, ys, dense, nfev = kernels.integrate(
        kernels.MINO, y0, _pack(params, consts), 0.0, direction * math.inf,
        opts.rel_tol, opts.abs_tol, opts.max_steps, 6, s_target,
    )
    return _finish(MINO_MODE, kernels.MINO, params, consts, q_charge, status, xs, ys, dense, nfev, opts)


def integrate_hamiltonian(params, q_charge, init, opts=None, s_start=0.0, s_target=None, y0=None):
    """Integrate the canonical equations in the affine parameter from ``s_start`` to ``s_target``."""
    opts = opts or IntegratorOptions(mode=HAMILTONIAN_MODE)
    _initial_checks(params, init)
    consts = constants_from_state(params, q_charge, init)
    if y0 is None:
        p_r, p_th, p_phi, p_t = canonical_momenta(params, q_charge, init)
        y0 = [init.r, init.theta, init.phi, init.t, p_r, p_th, p_phi, p_t]
    s_target = s_start + opts.s_span if s_target is None else s_target
    status, xs, ys, dense, nfev = kernels.integrate(
        kernels.HAMILTONIAN, list(y0), _pack(params, consts), s_start, s_target,
        opts.rel_tol, opts.abs_tol, opts.max_steps,
    )
    return _finish(HAMILTONIAN_MODE, kernels.HAMILTONIAN, params, consts, q_charge, status, xs, ys, dense, nfev, opts)


def integrate(params, q_charge, init, opts=None):
    opts = opts or IntegratorOptions()
    if opts.mode == MINO_MODE:
        return integrate_mino(params, q_charge, init, opts)
    return integrate_hamiltonian(params, q_charge, init, opts)


def _dense_value(rc, theta, fn):
    row = [kernels.dense_eval(rc, theta, i) for i in range(rc.shape[1])]
    return fn(row)


def _bisect_frac(rc, fn, f0):
    lo, hi = 0.0, 1.0
    for _ in range(100):
        if hi - lo <= 1e-14:
            break
        mid = 0.5 * (lo + hi)
        fm = _dense_value(rc, mid, fn)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (f0 > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def event_scan(record, params):
    """Locate sign changes of the turning and locus functions along the dense output.

    Turning points are sign changes of dr and dtheta (R and Theta touch
    zero there without changing sign); loci are sign changes of Delta_r,
    Delta_theta and Sigma.
    """
    mino = record.mode == MINO_MODE
    ti = 2 if mino else 1
    a, e, L, M = params.a, params.e, params.L, params.M

    def dr_fn(y):
        r = y[0]
        return (r * r - a * a) * (1.0 - L * r * r) - 2.0 * M * r - e * e

    def dth_fn(y):
        c = math.cos(y[ti])
        return 1.0 - L * a * a * c * c

    def sig_fn(y):
        c = math.cos(y[ti])
        return y[0] * y[0] - a * a * c * c

    fns = [
        (R_TURN, (lambda y: y[1]) if mino else (lambda y: y[4])),
        (THETA_TURN, (lambda y: y[3]) if mino else (lambda y: y[5])),
        (HORIZON, dr_fn),
        (THETA_HORIZON, dth_fn),
        (SINGULARITY, sig_fn),
    ]
    xs = record.samples[:, 0]
    ys = record.raw
    out = []
    for k in range(len(xs) - 1):
        rc = record.dense[k]
        for kind, fn in fns:
            f0 = fn(ys[k])
            f1 = fn(ys[k + 1])
            if f0 == 0.0 or f0 * f1 >= 0.0:
                continue
            frac = _bisect_frac(rc, fn, f0)
            x = xs[k] + frac * (xs[k + 1] - xs[k])
            y = [kernels.dense_eval(rc, frac, i) for i in range(rc.shape[1])]
            s = y[6] if mino else x
            out.append(Event(float(x), float(s), kind, float(y[0]), float(y[ti])))
    out.sort(key=lambda ev: (abs(ev.param - xs[0]), ev.kind))
    return out


def final_state_agreement(rec_a, rec_b):
    """Largest relative difference of (r, theta, phi, t) between two final states.

    Each coordinate is divided by its largest magnitude along either
    trajectory (see ``excursion_scale``).
    """
    fa, fb = rec_a.samples[-1, 2:6], rec_b.samples[-1, 2:6]
    scale = np.maximum(excursion_scale(rec_a.samples[:, 2:]), excursion_scale(rec_b.samples[:, 2:]))[:4]
    return float(np.max(np.abs(fa - fb) / scale))


def round_trip(params, q_charge, init, opts=None):
    """Integrate forward by ``opts.s_span`` then back to s = 0.

    Returns (forward record, backward record, max relative deviation of the
    position and velocity from the seed).
    """
    opts = opts or IntegratorOptions()
    if opts.mode == MINO_MODE:
        fwd = integrate_mino(params, q_charge, init, opts)
        if fwd.status != "ok":
            raise IntegrationError(f"forward leg stopped: {fwd.status}")
        back = integrate_mino(
            params, q_charge, init, opts, consts=fwd.constants, s_target=0.0, y0=fwd.raw[-1].tolist()
        )
    else:
        fwd = integrate_hamiltonian(params, q_charge, init, opts)
        if fwd.status != "ok":
            raise IntegrationError(f"forward leg stopped: {fwd.status}")
        back = integrate_hamiltonian(
            params, q_charge, init, opts, s_start=fwd.final_s, s_target=0.0, y0=fwd.raw[-1].tolist()
        )
    seed = np.array(init.as_tuple())
    end = back.samples[-1, 2:]
    return fwd, back, float(np.max(np.abs(end - seed) / excursion_scale(fwd.samples[:, 2:])))


def excursion_scale(states):
    """Per-component denominators for comparing states along a trajectory.

    Each component is scaled by its largest magnitude over the trajectory,
    so phi and t, which start at zero, are judged against how far they
    travelled.  Velocity components with a tiny excursion (an equatorial
    orbit has vtheta = 0) fall back to 1e-3 of the largest velocity.
    """
    scale = np.max(np.abs(states), axis=0)
    vfloor = 1e-3 * max(float(np.max(scale[4:])), 1e-300)
    scale[4:] = np.maximum(scale[4:], vfloor)
    return np.maximum(scale, 1e-300)
