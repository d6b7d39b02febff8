# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""
Compiled integration kernels.  Same API and arithmetic order as
``_pykernels``; see that module for the state layouts.
"""

from libc.math cimport sin, cos, sqrt, fabs, pow, isfinite, INFINITY
from libc.stdlib cimport malloc, realloc, free

import numpy as np

DEF NMAX = 8

cdef int MINO = 0
cdef int ST_DONE = 0
cdef int ST_HORIZON = 1
cdef int ST_SINGULARITY = 2
cdef int ST_UNDERFLOW = 3
cdef int ST_MAXSTEPS = 4
cdef int ST_NONFINITE = 5
cdef int ST_THETA_HORIZON = 6
cdef int ST_DOMAIN = 7

cdef double HORIZON_BAND = 1e-6
cdef double SING_BAND = 1e-8
cdef double THETA_BAND = 1e-8
cdef double POLE_BAND = 1e-8
cdef double PI = 3.141592653589793

cdef double A21 = 0.2
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double A71 = 35.0 / 384.0, A73 = 500.0 / 1113.0, A74 = 125.0 / 192.0, A75 = -2187.0 / 6784.0
cdef double A76 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0, E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0, E7 = -1.0 / 40.0
cdef double D1 = -12715105075.0 / 11282082432.0
cdef double D3 = 87487479700.0 / 32700410799.0
cdef double D4 = -10690763975.0 / 1880347072.0
cdef double D5 = 701980252875.0 / 199316789632.0
cdef double D6 = -1453857185.0 / 822651844.0
cdef double D7 = 69997945.0 / 29380423.0

cdef double SAFE = 0.9
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 10.0
cdef double BETA = 0.04
cdef double EXPO1 = 0.2 - 0.04 * 0.75


cdef void _mino(const double* y, const double* p, double* out) noexcept nogil:
    cdef double M = p[0], a = p[1], e = p[2], L = p[3], Xi = p[4]
    cdef double qc = p[5], qm = p[6], E = p[7], Lz = p[8], K = p[9]
    cdef double r = y[0], rd = y[1], th = y[2], thd = y[3]
    cdef double S = sin(th), C = cos(th)
    cdef double a2 = a * a, r2 = r * r
    cdef double rr = r2 - a2, Xi2 = Xi * Xi
    cdef double dr = rr * (1.0 - L * r2) - 2.0 * M * r - e * e
    cdef double ddr = 2.0 * r * (1.0 - L * r2) - 2.0 * L * r * rr - 2.0 * M
    cdef double P = qc * e * r / Xi + a * Lz + rr * E
    cdef double dP = qc * e / Xi + 2.0 * r * E
    out[1] = 0.5 * (ddr * (qm * r2 - K) + dr * 2.0 * qm * r) - Xi2 * P * dP
    cdef double dth = 1.0 - L * a2 * C * C
    cdef double ddth = 2.0 * L * a2 * C * S
    cdef double D = Lz - a * E * S * S
    cdef double dD = -2.0 * a * E * S * C
    cdef double S2 = S * S
    out[3] = 0.5 * (ddth * (K - qm * a2 * C * C) + dth * 2.0 * qm * a2 * C * S) - Xi2 * (
        D * dD / S2 - D * D * C / (S2 * S)
    )
    out[0] = rd
    out[2] = thd
    out[4] = Xi2 * (a * P / dr + D / (S2 * dth))
    out[5] = Xi2 * (-rr * P / dr + D * a / dth)
    out[6] = r2 - a2 * C * C


cdef void _ham(const double* y, const double* p, double* out) noexcept nogil:
    cdef double M = p[0], a = p[1], e = p[2], L = p[3], Xi = p[4], qc = p[5]
    cdef double r = y[0], th = y[1]
    cdef double pr = y[4], pth = y[5], pph = y[6], pt = y[7]
    cdef double S = sin(th), C = cos(th)
    cdef double a2 = a * a, r2 = r * r
    cdef double rr = r2 - a2, Xi2 = Xi * Xi
    cdef double S2 = S * S, SC = S * C
    cdef double Sig = r2 - a2 * C * C
    cdef double Sig_r = 2.0 * r
    cdef double Sig_t = 2.0 * a2 * SC
    cdef double dr = rr * (1.0 - L * r2) - 2.0 * M * r - e * e
    cdef double dr_r = 2.0 * r * (1.0 - L * r2) - 2.0 * L * r * rr - 2.0 * M
    cdef double dth = 1.0 - L * a2 * C * C
    cdef double dth_t = 2.0 * L * a2 * SC

    cdef double w = 1.0 / (Xi2 * Sig)
    cdef double Ntt = a2 * S2 * dth + dr
    cdef double Ntp = a * S2 * (dth * rr - dr)
    cdef double Npp = S2 * (dth * rr * rr + dr * a2 * S2)
    cdef double gtt = Ntt * w, gtp = Ntp * w, gpp = Npp * w
    cdef double Ntt_r = dr_r
    cdef double Ntt_t = a2 * (2.0 * SC * dth + S2 * dth_t)
    cdef double Ntp_r = a * S2 * (2.0 * r * dth - dr_r)
    cdef double Ntp_t = a * (2.0 * SC * (dth * rr - dr) + S2 * dth_t * rr)
    cdef double Npp_r = S2 * (4.0 * r * dth * rr + dr_r * a2 * S2)
    cdef double Npp_t = 2.0 * SC * (dth * rr * rr + dr * a2 * S2) + S2 * (dth_t * rr * rr + dr * a2 * 2.0 * SC)
    cdef double gtt_r = Ntt_r * w - gtt * Sig_r / Sig
    cdef double gtp_r = Ntp_r * w - gtp * Sig_r / Sig
    cdef double gpp_r = Npp_r * w - gpp * Sig_r / Sig
    cdef double gtt_t = Ntt_t * w - gtt * Sig_t / Sig
    cdef double gtp_t = Ntp_t * w - gtp * Sig_t / Sig
    cdef double gpp_t = Npp_t * w - gpp * Sig_t / Sig

    cdef double det = gtt * gpp - gtp * gtp
    cdef double itt = gpp / det, itp = -gtp / det, ipp = gtt / det
    cdef double xtt = itt * gtt_r + itp * gtp_r
    cdef double xtp = itt * gtp_r + itp * gpp_r
    cdef double xpt = itp * gtt_r + ipp * gtp_r
    cdef double xpp = itp * gtp_r + ipp * gpp_r
    cdef double itt_r = -(xtt * itt + xtp * itp)
    cdef double itp_r = -(xtt * itp + xtp * ipp)
    cdef double ipp_r = -(xpt * itp + xpp * ipp)
    xtt = itt * gtt_t + itp * gtp_t
    xtp = itt * gtp_t + itp * gpp_t
    xpt = itp * gtt_t + ipp * gtp_t
    xpp = itp * gtp_t + ipp * gpp_t
    cdef double itt_t = -(xtt * itt + xtp * itp)
    cdef double itp_t = -(xtt * itp + xtp * ipp)
    cdef double ipp_t = -(xpt * itp + xpp * ipp)

    cdef double irr = dr / Sig
    cdef double irr_r = dr_r / Sig - dr * Sig_r / (Sig * Sig)
    cdef double irr_t = -dr * Sig_t / (Sig * Sig)
    cdef double ith = dth / Sig
    cdef double ith_r = -dth * Sig_r / (Sig * Sig)
    cdef double ith_t = dth_t / Sig - dth * Sig_t / (Sig * Sig)

    cdef double f = e * r / (Sig * Xi)
    cdef double f_r = e / (Sig * Xi) - e * r * Sig_r / (Sig * Sig * Xi)
    cdef double f_t = -e * r * Sig_t / (Sig * Sig * Xi)
    cdef double At = -f
    cdef double Ap = f * a * S2
    cdef double At_r = -f_r
    cdef double At_t = -f_t
    cdef double Ap_r = f_r * a * S2
    cdef double Ap_t = f_t * a * S2 + f * a * 2.0 * SC

    cdef double pit = pt + qc * At
    cdef double pip = pph + qc * Ap
    cdef double vr = irr * pr
    cdef double vth = ith * pth
    cdef double vt = itt * pit + itp * pip
    cdef double vp = itp * pit + ipp * pip

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


cdef inline void _rhs(int mode, const double* y, const double* p, double* out) noexcept nogil:
    if mode == MINO:
        _mino(y, p, out)
    else:
        _ham(y, p, out)


cdef int _guard(int mode, const double* y, const double* yold, const double* p) noexcept nogil:
    cdef double M = p[0], a = p[1], e = p[2], L = p[3]
    cdef int ti = 2 if mode == MINO else 1
    cdef double r = y[0], th = y[ti]
    if not (0.0 < th < PI):
        return ST_DOMAIN
    cdef double S = sin(th), C = cos(th)
    if fabs(S) < POLE_BAND:
        return ST_DOMAIN
    cdef double r2 = r * r, a2 = a * a
    cdef double dr = (r2 - a2) * (1.0 - L * r2) - 2.0 * M * r - e * e
    cdef double scale_r = 1.0 + fabs(L) * r2 * r2 + fabs(2.0 * M * r) + a2 + e * e
    cdef double sig = r2 - a2 * C * C
    cdef double dth = 1.0 - L * a2 * C * C
    cdef double ro = yold[0]
    cdef double Co = cos(yold[ti])
    cdef double dro = (ro * ro - a2) * (1.0 - L * ro * ro) - 2.0 * M * ro - e * e
    cdef double sigo = ro * ro - a2 * Co * Co
    cdef double dtho = 1.0 - L * a2 * Co * Co
    if fabs(sig) < SING_BAND * (r2 + a2 * C * C) or sig * sigo < 0.0:
        return ST_SINGULARITY
    if fabs(dr) < HORIZON_BAND * scale_r or dr * dro < 0.0:
        return ST_HORIZON
    if fabs(dth) < THETA_BAND or dth * dtho < 0.0:
        return ST_THETA_HORIZON
    return ST_DONE


cdef void _rk_step(int mode, const double* y, double h, const double* p, const double* k1,
                   double* k2, double* k3, double* k4, double* k5, double* k6, double* k7,
                   double* y5, double* err, int n) noexcept nogil:
    cdef double yt[NMAX]
    cdef int i
    for i in range(n):
        yt[i] = y[i] + h * A21 * k1[i]
    _rhs(mode, yt, p, k2)
    for i in range(n):
        yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
    _rhs(mode, yt, p, k3)
    for i in range(n):
        yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
    _rhs(mode, yt, p, k4)
    for i in range(n):
        yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
    _rhs(mode, yt, p, k5)
    for i in range(n):
        yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
    _rhs(mode, yt, p, k6)
    for i in range(n):
        y5[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i])
    _rhs(mode, y5, p, k7)
    for i in range(n):
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])


cdef void _dense(const double* y, const double* y5, double h, const double* k1, const double* k3,
                 const double* k4, const double* k5, const double* k6, const double* k7,
                 double* rc, int n) noexcept nogil:
    cdef int i
    cdef double ydiff, bspl
    for i in range(n):
        ydiff = y5[i] - y[i]
        bspl = h * k1[i] - ydiff
        rc[i] = y[i]
        rc[n + i] = ydiff
        rc[2 * n + i] = bspl
        rc[3 * n + i] = ydiff - h * k7[i] - bspl
        rc[4 * n + i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])


cdef inline double _dense_eval(const double* rc, double theta, int i, int n) noexcept nogil:
    cdef double t1 = 1.0 - theta
    return rc[i] + theta * (rc[n + i] + t1 * (rc[2 * n + i] + theta * (rc[3 * n + i] + t1 * rc[4 * n + i])))


def dense_eval(rc, double theta, int i):
    cdef double t1 = 1.0 - theta
    return rc[0][i] + theta * (rc[1][i] + t1 * (rc[2][i] + theta * (rc[3][i] + t1 * rc[4][i])))


cdef double _err_norm(const double* y, const double* y5, const double* err, double rtol, double atol,
                      int n) noexcept nogil:
    cdef double acc = 0.0, sk, u
    cdef int i
    for i in range(n):
        sk = atol + rtol * max(fabs(y[i]), fabs(y5[i]))
        u = err[i] / sk
        acc += u * u
    return sqrt(acc / n)


cdef double _initial_step(int mode, const double* y, const double* f0, const double* p, double direction,
                          double rtol, double atol, double hmax, int n) noexcept nogil:
    cdef double dnf = 0.0, dny = 0.0, sk, h, der2, der12, h1, u, v
    cdef double y1[NMAX]
    cdef double f1[NMAX]
    cdef int i
    for i in range(n):
        sk = atol + rtol * fabs(y[i])
        u = f0[i] / sk
        v = y[i] / sk
        dnf += u * u
        dny += v * v
    if dnf <= 1e-10 or dny <= 1e-10:
        h = 1e-6
    else:
        h = sqrt(dny / dnf) * 0.01
    h = min(h, hmax)
    for i in range(n):
        y1[i] = y[i] + direction * h * f0[i]
    _rhs(mode, y1, p, f1)
    der2 = 0.0
    for i in range(n):
        sk = atol + rtol * fabs(y[i])
        u = (f1[i] - f0[i]) / sk
        der2 += u * u
    der2 = sqrt(der2) / h
    der12 = max(fabs(der2), sqrt(dnf))
    if der12 <= 1e-15:
        h1 = max(1e-6, fabs(h) * 1e-3)
    else:
        h1 = pow(0.01 / der12, 0.2)
    return min(min(100.0 * fabs(h), h1), hmax)


def mino_rhs(y, p, out):
    cdef double yy[NMAX]
    cdef double pp[10]
    cdef double oo[NMAX]
    cdef int i
    for i in range(7):
        yy[i] = y[i]
    for i in range(10):
        pp[i] = p[i]
    _mino(yy, pp, oo)
    for i in range(7):
        out[i] = oo[i]


def ham_rhs(y, p, out):
    cdef double yy[NMAX]
    cdef double pp[10]
    cdef double oo[NMAX]
    cdef int i
    for i in range(8):
        yy[i] = y[i]
    for i in range(10):
        pp[i] = p[i]
    _ham(yy, pp, oo)
    for i in range(8):
        out[i] = oo[i]


def guard(int mode, y, yold, p):
    cdef double yy[NMAX]
    cdef double yo[NMAX]
    cdef double pp[10]
    cdef int i
    for i in range(len(y)):
        yy[i] = y[i]
        yo[i] = yold[i]
    for i in range(10):
        pp[i] = p[i]
    return _guard(mode, yy, yo, pp)


cdef int _all_finite(const double* y, int n) noexcept nogil:
    cdef int i
    for i in range(n):
        if not isfinite(y[i]):
            return 0
    return 1


def integrate(int mode, y0, p, double x0, double x_end, double rtol, double atol, long max_steps,
              int stop_idx=-1, double stop_val=0.0, double h0=0.0):
    """Compiled twin of ``_pykernels.integrate``."""
    cdef int n = len(y0)
    cdef double pp[10]
    cdef double y[NMAX]
    cdef double k1[NMAX]
    cdef double k2[NMAX]
    cdef double k3[NMAX]
    cdef double k4[NMAX]
    cdef double k5[NMAX]
    cdef double k6[NMAX]
    cdef double k7[NMAX]
    cdef double y5[NMAX]
    cdef double err[NMAX]
    cdef double fstar[NMAX]
    cdef double rc[5 * NMAX]
    cdef int i, it
    for i in range(10):
        pp[i] = p[i]
    for i in range(n):
        y[i] = y0[i]

    cdef double direction = 1.0 if x_end >= x0 else -1.0
    cdef double span = fabs(x_end - x0)
    cdef double hmax = span if isfinite(span) else INFINITY
    cdef double x = x0
    cdef long cap = 1024, count = 1, ndense = 0
    cdef double* xs = <double*> malloc(cap * sizeof(double))
    cdef double* ys = <double*> malloc(cap * n * sizeof(double))
    cdef double* ds = <double*> malloc(cap * 5 * n * sizeof(double))
    if xs == NULL or ys == NULL or ds == NULL:
        free(xs); free(ys); free(ds)
        raise MemoryError()
    xs[0] = x
    for i in range(n):
        ys[i] = y[i]

    _rhs(mode, y, pp, k1)
    cdef long nfev = 1
    cdef double h
    if h0 > 0.0:
        h = min(h0, hmax)
    else:
        h = _initial_step(mode, y, k1, pp, direction, rtol, atol, hmax, n)
        nfev += 1
    cdef double facold = 1e-4, en, fac11, fac, hnew = h, hs, x_new, g0, g1, gm, gs, lo, hi, mid, hstar
    cdef int reject = 0, status = ST_DONE, crossed, st
    cdef long steps = 0
    with nogil:
        while True:
            if steps >= max_steps:
                status = ST_MAXSTEPS
                break
            if stop_idx < 0 and fabs(x_end - x) <= 1e-14 * max(1.0, fabs(x)):
                break
            if fabs(h) < 1e-14 * max(1.0, fabs(x)):
                status = ST_UNDERFLOW
                break
            if stop_idx < 0 and fabs(h) > fabs(x_end - x):
                h = fabs(x_end - x)
            hs = direction * h
            _rk_step(mode, y, hs, pp, k1, k2, k3, k4, k5, k6, k7, y5, err, n)
            nfev += 6
            steps += 1
            en = _err_norm(y, y5, err, rtol, atol, n)
            if not isfinite(en):
                h *= 0.1
                reject = 1
                if fabs(h) < 1e-14 * max(1.0, fabs(x)):
                    status = ST_NONFINITE
                    break
                continue
            fac11 = pow(en, EXPO1)
            fac = fac11 / pow(facold, BETA)
            fac = max(1.0 / FAC_MAX, min(1.0 / FAC_MIN, fac / SAFE))
            hnew = h / fac
            if en > 1.0:
                h = h / min(1.0 / FAC_MIN, fac11 / SAFE)
                reject = 1
                continue
            facold = max(en, 1e-4)
            _dense(y, y5, hs, k1, k3, k4, k5, k6, k7, rc, n)
            x_new = x + hs
            crossed = 0
            if stop_idx >= 0:
                g0 = y[stop_idx] - stop_val
                g1 = y5[stop_idx] - stop_val
                crossed = g1 == 0.0 or (g0 != 0.0 and (g0 > 0.0) != (g1 > 0.0))
            if crossed:
                lo = 0.0
                hi = 1.0
                for it in range(200):
                    if hi - lo <= 1e-15:
                        break
                    mid = 0.5 * (lo + hi)
                    gm = _dense_eval(rc, mid, stop_idx, n) - stop_val
                    if gm == 0.0:
                        lo = mid
                        hi = mid
                        break
                    if (gm > 0.0) == (g0 > 0.0):
                        lo = mid
                    else:
                        hi = mid
                hstar = 0.5 * (lo + hi) * hs
                for it in range(4):
                    _rk_step(mode, y, hstar, pp, k1, k2, k3, k4, k5, k6, k7, y5, err, n)
                    nfev += 6
                    gs = y5[stop_idx] - stop_val
                    if fabs(gs) <= 1e-15 * max(1.0, fabs(stop_val)):
                        break
                    _rhs(mode, y5, pp, fstar)
                    nfev += 1
                    if fstar[stop_idx] == 0.0:
                        break
                    hstar -= gs / fstar[stop_idx]
                _dense(y, y5, hstar, k1, k3, k4, k5, k6, k7, rc, n)
                x_new = x + hstar
            st = _guard(mode, y5, y, pp)
            if count == cap:
                cap *= 2
                xs = <double*> realloc(xs, cap * sizeof(double))
                ys = <double*> realloc(ys, cap * n * sizeof(double))
                ds = <double*> realloc(ds, cap * 5 * n * sizeof(double))
                if xs == NULL or ys == NULL or ds == NULL:
                    status = -1
                    break
            xs[count] = x_new
            for i in range(n):
                ys[count * n + i] = y5[i]
            for i in range(5 * n):
                ds[ndense * 5 * n + i] = rc[i]
            count += 1
            ndense += 1
            for i in range(n):
                k1[i] = k7[i]
                y[i] = y5[i]
            x = x_new
            if st != ST_DONE:
                status = st
                break
            if not _all_finite(y, n):
                status = ST_NONFINITE
                break
            if crossed:
                break
            if reject:
                hnew = min(hnew, h)
                reject = 0
            h = min(hnew, hmax)
    if status == -1:
        free(xs); free(ys); free(ds)
        raise MemoryError()
    xs_a = np.empty(count, dtype=float)
    ys_a = np.empty((count, n), dtype=float)
    ds_a = np.empty((ndense, 5, n), dtype=float)
    cdef double[::1] xv = xs_a
    cdef double[:, ::1] yv = ys_a
    cdef double[:, :, ::1] dv = ds_a
    cdef long k
    for k in range(count):
        xv[k] = xs[k]
        for i in range(n):
            yv[k, i] = ys[k * n + i]
    for k in range(ndense):
        for it in range(5):
            for i in range(n):
                dv[k, it, i] = ds[k * 5 * n + it * n + i]
    free(xs)
    free(ys)
    free(ds)
    return status, xs_a, ys_a, ds_a, nfev
