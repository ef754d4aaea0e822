# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled stepping kernels; see _kernels_py for the interface contract."""

from libc.math cimport exp, expm1, fabs, isfinite


cdef inline double _phi(double x) noexcept nogil:
    # x / (exp(x) - 1), series branch across the removable zero
    if fabs(x) < 1.0e-4:
        return 1.0 - 0.5 * x + x * x / 12.0
    return x / expm1(x)


cdef inline double _sig(double z) noexcept nogil:
    cdef double e
    if z >= 0.0:
        e = exp(-z)
        return 1.0 / (1.0 + e)
    e = exp(z)
    return e / (1.0 + e)


cdef void _v_rhs_c(double[:, :] v, double[:, :, ::1] y, double[:, :] out,
                   const double[:, ::1] cur, const double[:, :, ::1] coup, bint has_coup,
                   double[:, ::1] gam, const double[::1] pv, double dh2) noexcept nogil:
    cdef Py_ssize_t nn = y.shape[0], nx = y.shape[2]
    cdef Py_ssize_t i, j, k
    cdef double g_na = pv[0], g_k = pv[1], g_l = pv[2]
    cdef double e_na = pv[3], e_k = pv[4], e_l = pv[5]
    cdef double inv_c = pv[6], s_rev = pv[7], lam = pv[8], theta = pv[9]
    cdef double vk, n, m, h, lap, ionic, drive

    if has_coup:
        for j in range(nn):
            for k in range(nx):
                gam[j, k] = _sig(lam * (v[j, k] - theta))

    for i in range(nn):
        for k in range(nx):
            vk = v[i, k]
            n = y[i, 1, k]
            m = y[i, 2, k]
            h = y[i, 3, k]
            if k == 0:
                lap = 2.0 * (v[i, 1] - vk)
            elif k == nx - 1:
                lap = 2.0 * (v[i, nx - 2] - vk)
            else:
                lap = v[i, k - 1] - 2.0 * vk + v[i, k + 1]
            ionic = (cur[i, k] + g_na * (m * m * m) * h * (e_na - vk)
                     + g_k * (n * n * n * n) * (e_k - vk)
                     + g_l * (e_l - vk))
            if has_coup:
                drive = 0.0
                for j in range(nn):
                    drive += coup[i, j, k] * gam[j, k]
                out[i, k] = ionic * inv_c + lap * dh2 + (s_rev - vk) * drive
            else:
                out[i, k] = ionic * inv_c + lap * dh2


cdef void _gate_rhs_c(double[:, :] v, double[:, :, ::1] y,
                      double[:, :, ::1] out) noexcept nogil:
    cdef Py_ssize_t nn = y.shape[0], nx = y.shape[2]
    cdef Py_ssize_t i, k
    cdef double vk, an, am, ah, bn, bm, bh
    for i in range(nn):
        for k in range(nx):
            vk = v[i, k]
            an = 0.1 * _phi(1.0 - 0.1 * vk)
            am = _phi(2.5 - 0.1 * vk)
            ah = 0.07 * exp(-vk / 20.0)
            bn = 0.125 * exp(-vk / 80.0)
            bm = 4.0 * exp(-vk / 18.0)
            bh = _sig(0.1 * vk - 3.0)
            out[i, 1, k] = an * (1.0 - y[i, 1, k]) - bn * y[i, 1, k]
            out[i, 2, k] = am * (1.0 - y[i, 2, k]) - bm * y[i, 2, k]
            out[i, 3, k] = ah * (1.0 - y[i, 3, k]) - bh * y[i, 3, k]


def rhs_full(double[:, :, ::1] y, double[:, :, ::1] out,
             const double[:, ::1] cur, const double[:, :, ::1] coup, bint has_coup,
             const double[::1] pv, double dh2, double[:, ::1] gam):
    with nogil:
        _v_rhs_c(y[:, 0, :], y, out[:, 0, :], cur, coup, has_coup, gam, pv, dh2)
        _gate_rhs_c(y[:, 0, :], y, out)


cdef void _rhs_c(double[:, :, ::1] y, double[:, :, ::1] out,
                 const double[:, ::1] cur, const double[:, :, ::1] coup, bint has_coup,
                 double[:, ::1] gam, const double[::1] pv, double dh2) noexcept nogil:
    _v_rhs_c(y[:, 0, :], y, out[:, 0, :], cur, coup, has_coup, gam, pv, dh2)
    _gate_rhs_c(y[:, 0, :], y, out)


def rk4_step(double[:, :, ::1] y, const double[:, ::1] cur, const double[:, :, ::1] coup,
             bint has_coup, const double[::1] pv, double dh2, double dt,
             double[:, :, ::1] k1, double[:, :, ::1] k2,
             double[:, :, ::1] k3, double[:, :, ::1] k4,
             double[:, :, ::1] yt, double[:, ::1] gam):
    cdef Py_ssize_t nn = y.shape[0], nc = y.shape[1], nx = y.shape[2]
    cdef Py_ssize_t i, c, k
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    with nogil:
        _rhs_c(y, k1, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for c in range(nc):
                for k in range(nx):
                    yt[i, c, k] = half * k1[i, c, k] + y[i, c, k]
        _rhs_c(yt, k2, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for c in range(nc):
                for k in range(nx):
                    yt[i, c, k] = half * k2[i, c, k] + y[i, c, k]
        _rhs_c(yt, k3, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for c in range(nc):
                for k in range(nx):
                    yt[i, c, k] = dt * k3[i, c, k] + y[i, c, k]
        _rhs_c(yt, k4, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for c in range(nc):
                for k in range(nx):
                    y[i, c, k] += sixth * (2.0 * (k2[i, c, k] + k3[i, c, k])
                                           + k1[i, c, k] + k4[i, c, k])


def v_rk4_step(double[:, :, ::1] y, const double[:, ::1] cur, const double[:, :, ::1] coup,
               bint has_coup, const double[::1] pv, double dh2, double dt,
               double[:, ::1] kv1, double[:, ::1] kv2,
               double[:, ::1] kv3, double[:, ::1] kv4,
               double[:, ::1] vt, double[:, ::1] gam):
    cdef Py_ssize_t nn = y.shape[0], nx = y.shape[2]
    cdef Py_ssize_t i, k
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef double[:, :] v = y[:, 0, :]
    with nogil:
        _v_rhs_c(v, y, kv1, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for k in range(nx):
                vt[i, k] = half * kv1[i, k] + v[i, k]
        _v_rhs_c(vt, y, kv2, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for k in range(nx):
                vt[i, k] = half * kv2[i, k] + v[i, k]
        _v_rhs_c(vt, y, kv3, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for k in range(nx):
                vt[i, k] = dt * kv3[i, k] + v[i, k]
        _v_rhs_c(vt, y, kv4, cur, coup, has_coup, gam, pv, dh2)
        for i in range(nn):
            for k in range(nx):
                v[i, k] += sixth * (2.0 * (kv2[i, k] + kv3[i, k])
                                    + kv1[i, k] + kv4[i, k])


cdef inline double _relax(double x, double a, double b, double dt) noexcept nogil:
    cdef double s = a + b
    cdef double x_inf = a / s
    cdef double w = exp(-dt * s)
    cdef double xr = x_inf + (x - x_inf) * w
    cdef double lo = x if x < 0.0 else 0.0
    cdef double hi = x if x > 1.0 else 1.0
    if xr < lo:
        return lo
    if xr > hi:
        return hi
    return xr


def gate_exact(double[:, :, ::1] y, double dt):
    cdef Py_ssize_t nn = y.shape[0], nx = y.shape[2]
    cdef Py_ssize_t i, k
    cdef double vk, an, am, ah, bn, bm, bh
    with nogil:
        for i in range(nn):
            for k in range(nx):
                vk = y[i, 0, k]
                an = 0.1 * _phi(1.0 - 0.1 * vk)
                am = _phi(2.5 - 0.1 * vk)
                ah = 0.07 * exp(-vk / 20.0)
                bn = 0.125 * exp(-vk / 80.0)
                bm = 4.0 * exp(-vk / 18.0)
                bh = _sig(0.1 * vk - 3.0)
                y[i, 1, k] = _relax(y[i, 1, k], an, bn, dt)
                y[i, 2, k] = _relax(y[i, 2, k], am, bm, dt)
                y[i, 3, k] = _relax(y[i, 3, k], ah, bh, dt)


def scan_state(double[:, :, ::1] y, double v_limit, double t,
               double[:, ::1] vext, Py_ssize_t[:, ::1] vnode,
               double[::1] gext, Py_ssize_t[::1] gloc):
    cdef Py_ssize_t nn = y.shape[0], nx = y.shape[2]
    cdef Py_ssize_t i, c, k
    cdef double val, smin, smax
    cdef Py_ssize_t ksmin, ksmax
    for i in range(nn):
        for k in range(nx):
            for c in range(4):
                val = y[i, c, k]
                if not isfinite(val):
                    return i, c, k, val
            val = y[i, 0, k]
            if fabs(val) > v_limit:
                return i, 0, k, val
    for i in range(nn):
        smin = y[i, 0, 0]
        smax = smin
        ksmin = 0
        ksmax = 0
        for k in range(1, nx):
            val = y[i, 0, k]
            if val < smin:
                smin = val
                ksmin = k
            if val > smax:
                smax = val
                ksmax = k
        if smin < vext[0, i]:
            vext[0, i] = smin
            vext[2, i] = t
            vnode[0, i] = ksmin
        if smax > vext[1, i]:
            vext[1, i] = smax
            vext[3, i] = t
            vnode[1, i] = ksmax
    for i in range(nn):
        for c in range(1, 4):
            for k in range(nx):
                val = y[i, c, k]
                if val < gext[0]:
                    gext[0] = val
                    gext[2] = t
                    gloc[0] = i
                    gloc[1] = c
                    gloc[2] = k
                if val > gext[1]:
                    gext[1] = val
                    gext[3] = t
                    gloc[3] = i
                    gloc[4] = c
                    gloc[5] = k
    return None
