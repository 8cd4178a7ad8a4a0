# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the coupled ODE integration loops.

Same contract as the pure-Python fallback in ode_py: block state Y with rows
(truth, nudged, sensitivities...), full componentwise nudging profile mu,
active[j] the source parameter index of sensitivity row j (-1 = no source).
Advances in place with classical RK4; returns 0 ok, 1/2/3 for a non-finite
truth/nudged/sensitivity block.
"""

import numpy as np

from libc.math cimport isfinite

BACKEND = "compiled"


cdef void _l63_deriv(double[:, ::1] y, double[:, ::1] out,
                     double g0, double g1, double g2,
                     double c0, double c1, double c2,
                     double m0, double m1, double m2,
                     long[::1] active, Py_ssize_t nsens) noexcept nogil:
    cdef double u0 = y[0, 0], u1 = y[0, 1], u2 = y[0, 2]
    cdef double v0 = y[1, 0], v1 = y[1, 1], v2 = y[1, 2]
    cdef Py_ssize_t j
    cdef long a
    cdef double w0, w1, w2, src0, src1, src2
    out[0, 0] = -g0 * (u0 - u1)
    out[0, 1] = u0 * (g1 - u2) - u1
    out[0, 2] = u0 * u1 - g2 * u2
    out[1, 0] = -c0 * (v0 - v1) - m0 * (v0 - u0)
    out[1, 1] = v0 * (c1 - v2) - v1 - m1 * (v1 - u1)
    out[1, 2] = v0 * v1 - c2 * v2 - m2 * (v2 - u2)
    for j in range(nsens):
        a = active[j]
        w0 = y[2 + j, 0]
        w1 = y[2 + j, 1]
        w2 = y[2 + j, 2]
        src0 = (v0 - v1) if a == 0 else 0.0
        src1 = v0 if a == 1 else 0.0
        src2 = v2 if a == 2 else 0.0
        out[2 + j, 0] = -c0 * (w0 - w1) - src0 - m0 * w0
        out[2 + j, 1] = w0 * (c1 - v2) - v0 * w2 - w1 + src1 - m1 * w1
        out[2 + j, 2] = w0 * v1 + v0 * w1 - c2 * w2 - src2 - m2 * w2


cdef int _block_status(double[:, ::1] y, Py_ssize_t nsens) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = y.shape[1]
    for i in range(n):
        if not isfinite(y[0, i]):
            return 1
    for i in range(n):
        if not isfinite(y[1, i]):
            return 2
    for j in range(nsens):
        for i in range(n):
            if not isfinite(y[2 + j, i]):
                return 3
    return 0


def advance_l63(double[:, ::1] y, double[::1] gamma, double[::1] c,
                double[::1] mu, long[::1] active, double dt, long nsteps):
    cdef Py_ssize_t nrows = y.shape[0]
    cdef Py_ssize_t nsens = nrows - 2
    if nsens != active.shape[0]:
        raise ValueError("need one block row per active parameter plus truth and nudged")
    k1_arr = np.empty((nrows, 3))
    k2_arr = np.empty((nrows, 3))
    k3_arr = np.empty((nrows, 3))
    k4_arr = np.empty((nrows, 3))
    tmp_arr = np.empty((nrows, 3))
    cdef double[:, ::1] k1 = k1_arr, k2 = k2_arr, k3 = k3_arr, k4 = k4_arr, tmp = tmp_arr
    cdef double g0 = gamma[0], g1 = gamma[1], g2 = gamma[2]
    cdef double c0 = c[0], c1 = c[1], c2 = c[2]
    cdef double m0 = mu[0], m1 = mu[1], m2 = mu[2]
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef Py_ssize_t step, i, q
    with nogil:
        for step in range(nsteps):
            _l63_deriv(y, k1, g0, g1, g2, c0, c1, c2, m0, m1, m2, active, nsens)
            for i in range(nrows):
                for q in range(3):
                    tmp[i, q] = y[i, q] + half * k1[i, q]
            _l63_deriv(tmp, k2, g0, g1, g2, c0, c1, c2, m0, m1, m2, active, nsens)
            for i in range(nrows):
                for q in range(3):
                    tmp[i, q] = y[i, q] + half * k2[i, q]
            _l63_deriv(tmp, k3, g0, g1, g2, c0, c1, c2, m0, m1, m2, active, nsens)
            for i in range(nrows):
                for q in range(3):
                    tmp[i, q] = y[i, q] + dt * k3[i, q]
            _l63_deriv(tmp, k4, g0, g1, g2, c0, c1, c2, m0, m1, m2, active, nsens)
            for i in range(nrows):
                for q in range(3):
                    y[i, q] = y[i, q] + sixth * (k1[i, q] + 2.0 * k2[i, q] + 2.0 * k3[i, q] + k4[i, q])
    return _block_status(y, nsens)


cdef void _l96_deriv(double[:, ::1] y, double[:, ::1] out,
                     double g0, double g1, double c0, double c1,
                     double[::1] damping, double forcing, double[::1] mu,
                     long[::1] active, Py_ssize_t nsens,
                     Py_ssize_t big, Py_ssize_t small) noexcept nogil:
    cdef Py_ssize_t k, j, r, row, base, idx, km1, kp1, kp2
    cdef long a
    cdef double su, sv, sw, adv, src
    for k in range(big):
        km1 = k - 1 if k > 0 else big - 1
        kp1 = k + 1 if k < big - 1 else 0
        kp2 = k + 2 if k < big - 2 else k + 2 - big
        base = big + k * small
        su = y[0, base]
        for j in range(1, small):
            su += y[0, base + j]
        out[0, k] = y[0, kp1] * (y[0, km1] - y[0, kp2]) + g0 * su * y[0, k] - g1 * y[0, k] + forcing
        sv = y[1, base]
        for j in range(1, small):
            sv += y[1, base + j]
        out[1, k] = (y[1, kp1] * (y[1, km1] - y[1, kp2]) + c0 * sv * y[1, k] - c1 * y[1, k]
                     + forcing - mu[k] * (y[1, k] - y[0, k]))
        for r in range(nsens):
            a = active[r]
            row = 2 + r
            sw = y[row, base]
            for j in range(1, small):
                sw += y[row, base + j]
            adv = y[row, kp1] * (y[1, km1] - y[1, kp2]) + y[1, kp1] * (y[row, km1] - y[row, kp2])
            src = sv * y[1, k] if a == 0 else (-y[1, k] if a == 1 else 0.0)
            out[row, k] = (adv + c0 * (sw * y[1, k] + sv * y[row, k]) - c1 * y[row, k]
                           + src - mu[k] * y[row, k])
    for k in range(big):
        base = big + k * small
        for j in range(small):
            idx = base + j
            out[0, idx] = -damping[j] * y[0, idx] - g0 * y[0, k] * y[0, k]
            out[1, idx] = (-damping[j] * y[1, idx] - c0 * y[1, k] * y[1, k]
                           - mu[idx] * (y[1, idx] - y[0, idx]))
            for r in range(nsens):
                a = active[r]
                row = 2 + r
                src = y[1, k] * y[1, k] if a == 0 else 0.0
                out[row, idx] = (-damping[j] * y[row, idx] - src
                                 - 2.0 * c0 * y[1, k] * y[row, k] - mu[idx] * y[row, idx])


def advance_l96(double[:, ::1] y, double[::1] gamma, double[::1] c,
                double[::1] damping, double forcing, double[::1] mu,
                long[::1] active, double dt, long nsteps, long big):
    cdef Py_ssize_t nrows = y.shape[0]
    cdef Py_ssize_t n = y.shape[1]
    cdef Py_ssize_t nsens = nrows - 2
    if nsens != active.shape[0]:
        raise ValueError("need one block row per active parameter plus truth and nudged")
    cdef Py_ssize_t small = (n - big) // big
    k1_arr = np.empty((nrows, n))
    k2_arr = np.empty((nrows, n))
    k3_arr = np.empty((nrows, n))
    k4_arr = np.empty((nrows, n))
    tmp_arr = np.empty((nrows, n))
    cdef double[:, ::1] k1 = k1_arr, k2 = k2_arr, k3 = k3_arr, k4 = k4_arr, tmp = tmp_arr
    cdef double g0 = gamma[0], g1 = gamma[1]
    cdef double c0 = c[0], c1 = c[1]
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef Py_ssize_t step, i, q
    with nogil:
        for step in range(nsteps):
            _l96_deriv(y, k1, g0, g1, c0, c1, damping, forcing, mu, active, nsens, big, small)
            for i in range(nrows):
                for q in range(n):
                    tmp[i, q] = y[i, q] + half * k1[i, q]
            _l96_deriv(tmp, k2, g0, g1, c0, c1, damping, forcing, mu, active, nsens, big, small)
            for i in range(nrows):
                for q in range(n):
                    tmp[i, q] = y[i, q] + half * k2[i, q]
            _l96_deriv(tmp, k3, g0, g1, c0, c1, damping, forcing, mu, active, nsens, big, small)
            for i in range(nrows):
                for q in range(n):
                    tmp[i, q] = y[i, q] + dt * k3[i, q]
            _l96_deriv(tmp, k4, g0, g1, c0, c1, damping, forcing, mu, active, nsens, big, small)
            for i in range(nrows):
                for q in range(n):
                    y[i, q] = y[i, q] + sixth * (k1[i, q] + 2.0 * k2[i, q] + 2.0 * k3[i, q] + k4[i, q])
    return _block_status(y, nsens)
