"""Pure-Python (numpy) fallback kernels for the coupled ODE integration loops.

Both backends share one contract. The coupled block state is packed as a 2D
array ``Y``: row 0 the truth trajectory, row 1 the nudged trajectory, rows 2+
the sensitivity tangents being integrated. ``mu`` is the full componentwise
nudging profile (zero on unobserved components). ``active[j]`` is the
parameter index feeding the source term of sensitivity row j; the value -1
integrates the homogeneous (source-free) sensitivity equation.

Kernels advance ``Y`` in place by ``nsteps`` classical RK4 steps of size
``dt`` and return a status code: 0 ok, 1/2/3 when the truth/nudged/
sensitivity block went non-finite.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _status(y, nsens):
    if not np.isfinite(y[0]).all():
        return 1
    if not np.isfinite(y[1]).all():
        return 2
    for j in range(nsens):
        if not np.isfinite(y[2 + j]).all():
            return 3
    return 0


def _l63_deriv(y, gamma, c, mu, active, out):
    u, v = y[0], y[1]
    out[0, 0] = -gamma[0] * (u[0] - u[1])
    out[0, 1] = u[0] * (gamma[1] - u[2]) - u[1]
    out[0, 2] = u[0] * u[1] - gamma[2] * u[2]
    out[1, 0] = -c[0] * (v[0] - v[1]) - mu[0] * (v[0] - u[0])
    out[1, 1] = v[0] * (c[1] - v[2]) - v[1] - mu[1] * (v[1] - u[1])
    out[1, 2] = v[0] * v[1] - c[2] * v[2] - mu[2] * (v[2] - u[2])
    for j, a in enumerate(active):
        w = y[2 + j]
        src0 = (v[0] - v[1]) if a == 0 else 0.0
        src1 = v[0] if a == 1 else 0.0
        src2 = v[2] if a == 2 else 0.0
        out[2 + j, 0] = -c[0] * (w[0] - w[1]) - src0 - mu[0] * w[0]
        out[2 + j, 1] = w[0] * (c[1] - v[2]) - v[0] * w[2] - w[1] + src1 - mu[1] * w[1]
        out[2 + j, 2] = w[0] * v[1] + v[0] * w[1] - c[2] * w[2] - src2 - mu[2] * w[2]


def advance_l63(y, gamma, c, mu, active, dt, nsteps):
    nsens = y.shape[0] - 2
    if nsens != len(active):
        raise ValueError("need one block row per active parameter plus truth and nudged")
    k1, k2, k3, k4, tmp = (np.empty_like(y) for _ in range(5))
    half = 0.5 * dt
    sixth = dt / 6.0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(nsteps):
            _l63_deriv(y, gamma, c, mu, active, k1)
            np.multiply(k1, half, out=tmp)
            tmp += y
            _l63_deriv(tmp, gamma, c, mu, active, k2)
            np.multiply(k2, half, out=tmp)
            tmp += y
            _l63_deriv(tmp, gamma, c, mu, active, k3)
            np.multiply(k3, dt, out=tmp)
            tmp += y
            _l63_deriv(tmp, gamma, c, mu, active, k4)
            y += sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return _status(y, nsens)


def _l96_site_sum(small):
    # sequential accumulation over j, same order as the compiled kernel
    s = small[:, 0].copy()
    for j in range(1, small.shape[1]):
        s += small[:, j]
    return s


def _l96_deriv(y, gamma, c, damping, forcing, mu, active, big, out):
    small_n = y.shape[1] - big

    def split(row):
        return row[:big], row[big:].reshape(big, small_n // big)

    ul, us = split(y[0])
    vl, vs = split(y[1])
    ul_m1, ul_p1, ul_p2 = np.roll(ul, 1), np.roll(ul, -1), np.roll(ul, -2)
    vl_m1, vl_p1, vl_p2 = np.roll(vl, 1), np.roll(vl, -1), np.roll(vl, -2)
    su = _l96_site_sum(us)
    sv = _l96_site_sum(vs)

    o_ul, o_us = split(out[0])
    o_ul[:] = ul_p1 * (ul_m1 - ul_p2) + gamma[0] * su * ul - gamma[1] * ul + forcing
    o_us[:] = -damping * us - gamma[0] * (ul**2)[:, None]

    o_vl, o_vs = split(out[1])
    o_vl[:] = vl_p1 * (vl_m1 - vl_p2) + c[0] * sv * vl - c[1] * vl + forcing
    o_vs[:] = -damping * vs - c[0] * (vl**2)[:, None]
    out[1] -= mu * (y[1] - y[0])

    for j, a in enumerate(active):
        wl, ws = split(y[2 + j])
        wl_m1, wl_p1, wl_p2 = np.roll(wl, 1), np.roll(wl, -1), np.roll(wl, -2)
        sw = _l96_site_sum(ws)
        adv = wl_p1 * (vl_m1 - vl_p2) + vl_p1 * (wl_m1 - wl_p2)
        src_l = sv * vl if a == 0 else (-vl if a == 1 else 0.0)
        o_wl, o_ws = split(out[2 + j])
        o_wl[:] = adv + c[0] * (sw * vl + sv * wl) - c[1] * wl + src_l
        o_ws[:] = -damping * ws - 2.0 * c[0] * (vl * wl)[:, None]
        if a == 0:
            o_ws -= (vl**2)[:, None]
        out[2 + j] -= mu * y[2 + j]


def advance_l96(y, gamma, c, damping, forcing, mu, active, dt, nsteps, big):
    nsens = y.shape[0] - 2
    if nsens != len(active):
        raise ValueError("need one block row per active parameter plus truth and nudged")
    k1, k2, k3, k4, tmp = (np.empty_like(y) for _ in range(5))
    half = 0.5 * dt
    sixth = dt / 6.0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(nsteps):
            _l96_deriv(y, gamma, c, damping, forcing, mu, active, big, k1)
            np.multiply(k1, half, out=tmp)
            tmp += y
            _l96_deriv(tmp, gamma, c, damping, forcing, mu, active, big, k2)
            np.multiply(k2, half, out=tmp)
            tmp += y
            _l96_deriv(tmp, gamma, c, damping, forcing, mu, active, big, k3)
            np.multiply(k3, dt, out=tmp)
            tmp += y
            _l96_deriv(tmp, gamma, c, damping, forcing, mu, active, big, k4)
            y += sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return _status(y, nsens)
