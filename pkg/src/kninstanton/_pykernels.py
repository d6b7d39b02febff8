"""
Pure-Python integration kernels.

Two right-hand sides share one Dormand-Prince 5(4) driver:

* mode 0, Mino form: y = [r, dr/dl, theta, dtheta/dl, phi, t, s]
* mode 1, canonical Hamiltonian: y = [r, theta, phi, t, p_r, p_theta, p_phi, p_t]

``p`` is the packed parameter vector
``[M, a, e, L, Xi, q_charge, q_mass, E, Lz, K]``.

The compiled module ``_ckernels`` implements the same functions with the
same arithmetic order.
"""

import math

import numpy as np

MINO = 0
HAMILTONIAN = 1

ST_DONE = 0
ST_HORIZON = 1
ST_SINGULARITY = 2
ST_UNDERFLOW = 3
ST_MAXSTEPS = 4
ST_NONFINITE = 5
ST_THETA_HORIZON = 6
ST_DOMAIN = 7

HORIZON_BAND = 1e-6
SING_BAND = 1e-8
THETA_BAND = 1e-8
POLE_BAND = 1e-8

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
A21 = 0.2
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
A71, A73, A74, A75, A76 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (
    71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0,
)
D1, D3, D4, D5, D6, D7 = (
    -12715105075.0 / 11282082432.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
)

SAFE = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0
BETA = 0.04
EXPO1 = 0.2 - BETA * 0.75


def mino_rhs(y, p, out):
    M, a, e, L, Xi, qc, qm, E, Lz, K = p
    r, rd, th, thd = y[0], y[1], y[2], y[3]
    S = math.sin(th)
    C = math.cos(th)
    a2 = a * a
    r2 = r * r
    rr = r2 - a2
    Xi2 = Xi * Xi
    dr = rr * (1.0 - L * r2) - 2.0 * M * r - e * e
    ddr = 2.0 * r * (1.0 - L * r2) - 2.0 * L * r * rr - 2.0 * M
    P = qc * e * r / Xi + a * Lz + rr * E
    dP = qc * e / Xi + 2.0 * r * E
    # R'/2
    out[1] = 0.5 * (ddr * (qm * r2 - K) + dr * 2.0 * qm * r) - Xi2 * P * dP
    dth = 1.0 - L * a2 * C * C
    ddth = 2.0 * L * a2 * C * S
    D = Lz - a * E * S * S
    dD = -2.0 * a * E * S * C
    S2 = S * S
    # Theta'/2
    out[3] = 0.5 * (ddth * (K - qm * a2 * C * C) + dth * 2.0 * qm * a2 * C * S) - Xi2 * (
        D * dD / S2 - D * D * C / (S2 * S)
    )
    out[0] = rd
    out[2] = thd
    out[4] = Xi2 * (a * P / dr + D / (S2 * dth))
    out[5] = Xi2 * (-rr * P / dr + D * a / dth)
    out[6] = r2 - a2 * C * C


def ham_rhs(y, p, out):
    M, a, e, L, Xi, qc, qm, E, Lz, K = p
    r, th = y[0], y[1]
    pr, pth, pph, pt = y[4], y[5], y[6], y[7]
    S = math.sin(th)
    C = math.cos(th)
    a2 = a * a
    r2 = r * r
    rr = r2 - a2
    Xi2 = Xi * Xi
    S2 = S * S
    SC = S * C
    Sig = r2 - a2 * C * C
    Sig_r = 2.0 * r
    Sig_t = 2.0 * a2 * SC
    dr = rr * (1.0 - L * r2) - 2.0 * M * r - e * e
    dr_r = 2.0 * r * (1.0 - L * r2) - 2.0 * L * r * rr - 2.0 * M
    dth = 1.0 - L * a2 * C * C
    dth_t = 2.0 * L * a2 * SC

    # covariant (t, phi) block, g = N / (Xi^2 Sigma)
    w = 1.0 / (Xi2 * Sig)
    Ntt = a2 * S2 * dth + dr
    Ntp = a * S2 * (dth * rr - dr)
    Npp = S2 * (dth * rr * rr + dr * a2 * S2)
    gtt = Ntt * w
    gtp = Ntp * w
    gpp = Npp * w
    Ntt_r = dr_r
    Ntt_t = a2 * (2.0 * SC * dth + S2 * dth_t)
    Ntp_r = a * S2 * (2.0 * r * dth - dr_r)
    Ntp_t = a * (2.0 * SC * (dth * rr - dr) + S2 * dth_t * rr)
    Npp_r = S2 * (4.0 * r * dth * rr + dr_r * a2 * S2)
    Npp_t = 2.0 * SC * (dth * rr * rr + dr * a2 * S2) + S2 * (dth_t * rr * rr + dr * a2 * 2.0 * SC)
    gtt_r = Ntt_r * w - gtt * Sig_r / Sig
    gtp_r = Ntp_r * w - gtp * Sig_r / Sig
    gpp_r = Npp_r * w - gpp * Sig_r / Sig
    gtt_t = Ntt_t * w - gtt * Sig_t / Sig
    gtp_t = Ntp_t * w - gtp * Sig_t / Sig
    gpp_t = Npp_t * w - gpp * Sig_t / Sig

    det = gtt * gpp - gtp * gtp
    itt = gpp / det
    itp = -gtp / det
    ipp = gtt / det
    # d(g^-1) = -g^-1 dg g^-1 on the 2x2 block
    xtt = itt * gtt_r + itp * gtp_r
    xtp = itt * gtp_r + itp * gpp_r
    xpt = itp * gtt_r + ipp * gtp_r
    xpp = itp * gtp_r + ipp * gpp_r
    itt_r = -(xtt * itt + xtp * itp)
    itp_r = -(xtt * itp + xtp * ipp)
    ipp_r = -(xpt * itp + xpp * ipp)
    xtt = itt * gtt_t + itp * gtp_t
    xtp = itt * gtp_t + itp * gpp_t
    xpt = itp * gtt_t + ipp * gtp_t
    xpp = itp * gtp_t + ipp * gpp_t
    itt_t = -(xtt * itt + xtp * itp)
    itp_t = -(xtt * itp + xtp * ipp)
    ipp_t = -(xpt * itp + xpp * ipp)

    irr = dr / Sig
    irr_r = dr_r / Sig - dr * Sig_r / (Sig * Sig)
    irr_t = -dr * Sig_t / (Sig * Sig)
    ith = dth / Sig
    ith_r = -dth * Sig_r / (Sig * Sig)
    ith_t = dth_t / Sig - dth * Sig_t / (Sig * Sig)

    # Maxwell potential and derivatives
    f = e * r / (Sig * Xi)
    f_r = e / (Sig * Xi) - e * r * Sig_r / (Sig * Sig * Xi)
    f_t = -e * r * Sig_t / (Sig * Sig * Xi)
    At = -f
    Ap = f * a * S2
    At_r = -f_r
    At_t = -f_t
    Ap_r = f_r * a * S2
    Ap_t = f_t * a * S2 + f * a * 2.0 * SC

    pit = pt + qc * At
    pip = pph + qc * Ap
    vr = irr * pr
    vth = ith * pth
    vt = itt * pit + itp * pip
    vp = itp * pit + ipp * pip

    out[0] = vr
    out[1] = vth
    out[2] = vp
    out[3] = vt
    out[4] = -(
        0.5 * (irr_r * pr * pr + ith_r * pth * pth + itt_r * pit * pit + 2.0 * itp_r * pit * pip + ipp_r * pip * pip)
        + qc * (vt * At_r + vp * Ap_r)
    )
    out[5] = -(
        0.5 * (irr_t * pr * pr + ith_t * pth * pth + itt_t * pit * pit + 2.0 * itp_t * pit * pip + ipp_t * pip * pip)
        + qc * (vt * At_t + vp * Ap_t)
    )
    out[6] = 0.0
    out[7] = 0.0


def guard(mode, y, yold, p):
    """Status code if ``y`` sits in a stop band or crossed a locus since ``yold``."""
    M, a, e, L = p[0], p[1], p[2], p[3]
    ti = 2 if mode == MINO else 1
    r = y[0]
    th = y[ti]
    if not (0.0 < th < math.pi):
        return ST_DOMAIN
    S = math.sin(th)
    C = math.cos(th)
    if abs(S) < POLE_BAND:
        return ST_DOMAIN
    r2 = r * r
    a2 = a * a
    dr = (r2 - a2) * (1.0 - L * r2) - 2.0 * M * r - e * e
    scale_r = 1.0 + abs(L) * r2 * r2 + abs(2.0 * M * r) + a2 + e * e
    sig = r2 - a2 * C * C
    dth = 1.0 - L * a2 * C * C
    ro = yold[0]
    Co = math.cos(yold[ti])
    dro = (ro * ro - a2) * (1.0 - L * ro * ro) - 2.0 * M * ro - e * e
    sigo = ro * ro - a2 * Co * Co
    dtho = 1.0 - L * a2 * Co * Co
    if abs(sig) < SING_BAND * (r2 + a2 * C * C) or sig * sigo < 0.0:
        return ST_SINGULARITY
    if abs(dr) < HORIZON_BAND * scale_r or dr * dro < 0.0:
        return ST_HORIZON
    if abs(dth) < THETA_BAND or dth * dtho < 0.0:
        return ST_THETA_HORIZON
    return ST_DONE


def _rk_step(rhs, x, y, h, p, k1, n):
    """One DOPRI5 step from (x, y) with k1 = f(y).  Returns (y5, err_vec, k list)."""
    k2 = [0.0] * n
    k3 = [0.0] * n
    k4 = [0.0] * n
    k5 = [0.0] * n
    k6 = [0.0] * n
    k7 = [0.0] * n
    yt = [0.0] * n
    for i in range(n):
        yt[i] = y[i] + h * A21 * k1[i]
    rhs(yt, p, k2)
    for i in range(n):
        yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
    rhs(yt, p, k3)
    for i in range(n):
        yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
    rhs(yt, p, k4)
    for i in range(n):
        yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
    rhs(yt, p, k5)
    for i in range(n):
        yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
    rhs(yt, p, k6)
    y5 = [0.0] * n
    for i in range(n):
        y5[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i])
    rhs(y5, p, k7)
    err = [0.0] * n
    for i in range(n):
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    return y5, err, (k1, k2, k3, k4, k5, k6, k7)


def _dense(y, y5, h, ks, n):
    k1, k2, k3, k4, k5, k6, k7 = ks
    rc = [[0.0] * n for _ in range(5)]
    for i in range(n):
        ydiff = y5[i] - y[i]
        bspl = h * k1[i] - ydiff
        rc[0][i] = y[i]
        rc[1][i] = ydiff
        rc[2][i] = bspl
        rc[3][i] = ydiff - h * k7[i] - bspl
        rc[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
    return rc


def dense_eval(rc, theta, i):
    t1 = 1.0 - theta
    return rc[0][i] + theta * (rc[1][i] + t1 * (rc[2][i] + theta * (rc[3][i] + t1 * rc[4][i])))


def _err_norm(y, y5, err, rtol, atol, n):
    acc = 0.0
    for i in range(n):
        sk = atol + rtol * max(abs(y[i]), abs(y5[i]))
        u = err[i] / sk
        acc += u * u
    return math.sqrt(acc / n)


def _initial_step(rhs, x, y, f0, p, direction, rtol, atol, hmax, n):
    dnf = 0.0
    dny = 0.0
    for i in range(n):
        sk = atol + rtol * abs(y[i])
        u = f0[i] / sk
        v = y[i] / sk
        dnf += u * u
        dny += v * v
    if dnf <= 1e-10 or dny <= 1e-10:
        h = 1e-6
    else:
        h = math.sqrt(dny / dnf) * 0.01
    h = min(h, hmax)
    y1 = [y[i] + direction * h * f0[i] for i in range(n)]
    f1 = [0.0] * n
    rhs(y1, p, f1)
    der2 = 0.0
    for i in range(n):
        sk = atol + rtol * abs(y[i])
        u = (f1[i] - f0[i]) / sk
        der2 += u * u
    der2 = math.sqrt(der2) / h
    der12 = max(abs(der2), math.sqrt(dnf))
    if der12 <= 1e-15:
        h1 = max(1e-6, abs(h) * 1e-3)
    else:
        h1 = (0.01 / der12) ** 0.2
    return min(100.0 * abs(h), h1, hmax)


def integrate(mode, y0, p, x0, x_end, rtol, atol, max_steps, stop_idx=-1, stop_val=0.0, h0=0.0):
    """Adaptive DOPRI5 with PI step control from x0 toward x_end.

    With ``stop_idx >= 0`` integration halts where component ``stop_idx``
    crosses ``stop_val``; the last step is redone exactly to land on it.
    Returns ``(status, xs, ys, dense, nfev)`` where ``dense[k]`` holds the
    five interpolation rows for step k.
    """
    rhs = mino_rhs if mode == MINO else ham_rhs
    p = [float(v) for v in p]
    y = [float(v) for v in y0]
    n = len(y)
    direction = 1.0 if x_end >= x0 else -1.0
    span = abs(x_end - x0)
    hmax = span if math.isfinite(span) else math.inf
    x = float(x0)
    xs = [x]
    ys = [list(y)]
    dense = []
    k1 = [0.0] * n
    rhs(y, p, k1)
    nfev = 1
    if h0 > 0.0:
        h = min(h0, hmax)
    else:
        h = _initial_step(rhs, x, y, k1, p, direction, rtol, atol, hmax, n)
        nfev += 1
    facold = 1e-4
    reject = False
    status = ST_DONE
    steps = 0
    while True:
        if steps >= max_steps:
            status = ST_MAXSTEPS
            break
        if stop_idx < 0 and abs(x_end - x) <= 1e-14 * max(1.0, abs(x)):
            break
        if abs(h) < 1e-14 * max(1.0, abs(x)):
            status = ST_UNDERFLOW
            break
        if stop_idx < 0 and abs(h) > abs(x_end - x):
            h = abs(x_end - x)
        hs = direction * h
        y5, err, ks = _rk_step(rhs, x, y, hs, p, k1, n)
        nfev += 6
        steps += 1
        en = _err_norm(y, y5, err, rtol, atol, n)
        if not math.isfinite(en):
            h *= 0.1
            reject = True
            if abs(h) < 1e-14 * max(1.0, abs(x)):
                status = ST_NONFINITE
                break
            continue
        fac11 = en**EXPO1
        fac = fac11 / facold**BETA
        fac = max(1.0 / FAC_MAX, min(1.0 / FAC_MIN, fac / SAFE))
        hnew = h / fac
        if en > 1.0:
            h = h / min(1.0 / FAC_MIN, fac11 / SAFE)
            reject = True
            continue
        facold = max(en, 1e-4)
        rc = _dense(y, y5, hs, ks, n)
        x_new = x + hs
        crossed = False
        if stop_idx >= 0:
            g0 = y[stop_idx] - stop_val
            g1 = y5[stop_idx] - stop_val
            crossed = g1 == 0.0 or (g0 != 0.0 and (g0 > 0.0) != (g1 > 0.0))
        if crossed:
            lo, hi = 0.0, 1.0
            for _ in range(200):
                if hi - lo <= 1e-15:
                    break
                mid = 0.5 * (lo + hi)
                gm = dense_eval(rc, mid, stop_idx) - stop_val
                if gm == 0.0:
                    lo = hi = mid
                    break
                if (gm > 0.0) == (g0 > 0.0):
                    lo = mid
                else:
                    hi = mid
            hstar = 0.5 * (lo + hi) * hs
            fstar = [0.0] * n
            for _ in range(4):
                y5, err, ks = _rk_step(rhs, x, y, hstar, p, k1, n)
                nfev += 6
                gs = y5[stop_idx] - stop_val
                if abs(gs) <= 1e-15 * max(1.0, abs(stop_val)):
                    break
                rhs(y5, p, fstar)
                nfev += 1
                if fstar[stop_idx] == 0.0:
                    break
                hstar -= gs / fstar[stop_idx]
            rc = _dense(y, y5, hstar, ks, n)
            x_new = x + hstar
        st = guard(mode, y5, y, p)
        xs.append(x_new)
        ys.append(list(y5))
        dense.append(rc)
        k1 = list(ks[6])
        x = x_new
        y = y5
        if st != ST_DONE:
            status = st
            break
        if not all(math.isfinite(v) for v in y):
            status = ST_NONFINITE
            break
        if crossed:
            break
        if reject:
            hnew = min(hnew, h)
            reject = False
        h = min(hnew, hmax)
    return (
        status,
        np.asarray(xs, dtype=float),
        np.asarray(ys, dtype=float).reshape(len(xs), n),
        np.asarray(dense, dtype=float).reshape(len(dense), 5, n),
        nfev,
    )
