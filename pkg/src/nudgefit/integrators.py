"""Time integration of the coupled truth / nudged / sensitivity systems.

ODE models advance with classical RK4 applied to the joint block system, so
the nudging and sensitivity equations see the truth and nudged states at the
proper RK4 stage values. The truth block never depends on the other blocks,
which keeps the truth trajectory bit-identical whether or not sensitivities
are integrated alongside.

The Kuramoto-Sivashinsky systems advance with an exponential (ETDRK4)
integrator: every Fourier-diagonal linear term, including the nudging damping
-mu I_h on observed modes, sits in the exactly-integrated operator, and only
the dealiased quadratic term plus the nudging source mu I_h u(t) are treated
explicitly. The stiffness coefficients depend on the current parameter vector
and are rebuilt on every call, so a parameter punch between calls is picked up
automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import ConfigError, DivergenceError
from .models.base import Model, SensitivityStack
from .models.kse import KuramotoSivashinsky
from .models.lorenz63 import Lorenz63
from .models.lorenz96 import Lorenz96TwoLayer

RK4_STABILITY_LIMIT = 2.5


@dataclass
class IntegratorConfig:
    """Inner-step configuration: scheme, step size, nudging strength."""

    dt: float
    mu: object  # scalar or per-component array
    scheme: str = "rk4"  # "rk4" | "spectral"

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ConfigError("dt must be positive")
        if self.scheme not in ("rk4", "spectral"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        mu_max = float(np.max(np.asarray(self.mu)))
        if mu_max < 0.0 or not np.all(np.asarray(self.mu) >= 0.0):
            raise ConfigError("mu must be non-negative")
        if self.scheme == "rk4" and mu_max * self.dt > RK4_STABILITY_LIMIT:
            raise ConfigError(
                f"mu*dt = {mu_max * self.dt:.3g} exceeds the RK4 stability heuristic "
                f"{RK4_STABILITY_LIMIT}; reduce dt or mu"
            )


@dataclass
class CoupledState:
    """Truth/nudged pair plus optional in-flight sensitivity tangents."""

    truth: np.ndarray
    nudged: np.ndarray
    sensitivities: Optional[SensitivityStack]
    time: float = 0.0


def rk4_step(f, y, dt):
    """One classical fourth-order Runge-Kutta step of y' = f(y)."""
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _split_steps(duration, dt):
    """Snap a duration to whole inner steps plus an optional shortened last step."""
    n_full = int(np.floor(duration / dt + 1e-9))
    if n_full == 0:
        raise ConfigError("duration must cover at least one inner step")
    rem = duration - n_full * dt
    if rem < 1e-9 * max(dt, 1.0):
        rem = 0.0
    return n_full, rem


def advance_coupled(model, state, c, gamma, cfg, op, duration, mode,
                    active=None, truth_model=None):
    """Advance the coupled system for ``duration`` and return the new state.

    mode "ds" integrates one sensitivity tangent per entry of ``active``
    (zero-initialized when the incoming state carries none); "otf" and "none"
    integrate only the truth/nudged pair. The incoming state is not mutated.
    """
    if mode not in ("ds", "otf", "none"):
        raise ConfigError(f"unknown sensitivity mode {mode!r}")
    truth_model = truth_model or model
    c = model.check_params(c)
    gamma = truth_model.check_params(gamma)
    if active is None:
        active = tuple(range(model.param_count))
    active = tuple(int(a) for a in active)

    u = model.check_state(np.array(state.truth, dtype=model.state_dtype))
    v = model.check_state(np.array(state.nudged, dtype=model.state_dtype))
    if mode == "ds":
        if state.sensitivities is not None:
            if state.sensitivities.param_indices != active:
                raise ConfigError("sensitivity stack does not match the active parameters")
            w = np.array(state.sensitivities.columns, dtype=model.state_dtype)
        else:
            w = np.zeros((len(active), model.dimension), dtype=model.state_dtype)
    else:
        w = np.zeros((0, model.dimension), dtype=model.state_dtype)
    sens_active = active if mode == "ds" else ()

    n_full, rem = _split_steps(duration, cfg.dt)

    if isinstance(model, KuramotoSivashinsky):
        _advance_kse(model, truth_model, u, v, w, gamma, c, cfg, op, sens_active, n_full, rem)
    elif isinstance(model, Lorenz63) and type(truth_model) is type(model):
        _advance_kernel(kernels.advance_l63, (), model, u, v, w, gamma, c, cfg, op,
                        sens_active, n_full, rem)
    elif (isinstance(model, Lorenz96TwoLayer) and type(truth_model) is type(model)
          and _same_l96_constants(model, truth_model)):
        extra = (model.big_count,)
        _advance_kernel(kernels.advance_l96,
                        (model.damping, model.forcing), model, u, v, w, gamma, c, cfg, op,
                        sens_active, n_full, rem, trailing=extra)
    else:
        _advance_generic(model, truth_model, u, v, w, gamma, c, cfg, op, sens_active, n_full, rem)

    stack = None
    if mode == "ds":
        stack = SensitivityStack(columns=w, source="ds", param_indices=active)
    return CoupledState(truth=u, nudged=v, sensitivities=stack, time=state.time + duration)


def _same_l96_constants(a, b):
    return (a.big_count == b.big_count and a.small_per_site == b.small_per_site
            and np.array_equal(a.damping, b.damping) and a.forcing == b.forcing)


_STATUS_NAMES = {1: "truth", 2: "nudged", 3: "sensitivity"}


def _advance_kernel(kernel, constants, model, u, v, w, gamma, c, cfg, op,
                    active, n_full, rem, trailing=()):
    if cfg.scheme != "rk4":
        raise ConfigError("ODE models integrate with the rk4 scheme")
    mu = op.mu_profile(cfg.mu)
    y = np.empty((2 + w.shape[0], model.dimension))
    y[0], y[1] = u, v
    if w.shape[0]:
        y[2:] = w
    act = np.asarray(active, dtype=np.int64)
    if mu.max(initial=0.0) * cfg.dt > RK4_STABILITY_LIMIT:
        raise ConfigError("mu*dt exceeds the RK4 stability heuristic")
    status = 0
    if n_full:
        status = kernel(y, gamma, c, *constants, mu, act, cfg.dt, n_full, *trailing)
    if status == 0 and rem:
        status = kernel(y, gamma, c, *constants, mu, act, rem, 1, *trailing)
    if status:
        raise DivergenceError(_STATUS_NAMES[status])
    u[:], v[:] = y[0], y[1]
    if w.shape[0]:
        w[:] = y[2:]


def _advance_generic(model, truth_model, u, v, w, gamma, c, cfg, op, active, n_full, rem):
    """Model-method-driven joint RK4; reference path for custom models."""
    mu = op.mu_profile(cfg.mu)
    nsens = w.shape[0]

    def deriv(uu, vv, ww):
        du = truth_model.rhs(uu, gamma)
        dv = model.rhs(vv, c) - mu * (vv - uu)
        dw = np.empty_like(ww)
        for r, a in enumerate(active[:nsens]):
            dw[r] = model.jacobian_vector_product(vv, c, ww[r]) - mu * ww[r]
            if a >= 0:
                dw[r] += model.param_derivative(vv, c, a)
        return du, dv, dw

    def step(uu, vv, ww, dt):
        k1 = deriv(uu, vv, ww)
        k2 = deriv(uu + 0.5 * dt * k1[0], vv + 0.5 * dt * k1[1], ww + 0.5 * dt * k1[2])
        k3 = deriv(uu + 0.5 * dt * k2[0], vv + 0.5 * dt * k2[1], ww + 0.5 * dt * k2[2])
        k4 = deriv(uu + dt * k3[0], vv + dt * k3[1], ww + dt * k3[2])
        scale = dt / 6.0
        return (uu + scale * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                vv + scale * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
                ww + scale * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]))

    with np.errstate(over="ignore", invalid="ignore"):
        uu, vv, ww = u, v, w
        for _ in range(n_full):
            uu, vv, ww = step(uu, vv, ww, cfg.dt)
        if rem:
            uu, vv, ww = step(uu, vv, ww, rem)
    _check_finite(uu, vv, ww)
    u[:], v[:], w[:] = uu, vv, ww


def _check_finite(u, v, w):
    if not np.isfinite(u).all():
        raise DivergenceError("truth")
    if not np.isfinite(v).all():
        raise DivergenceError("nudged")
    if not np.isfinite(w).all():
        raise DivergenceError("sensitivity")


# -- spectral (KSE) path -----------------------------------------------------

_CONTOUR_POINTS = 32


def _etdrk4_coeffs(lam, dt):
    """ETDRK4 weights for a stack of diagonal linear operators.

    Contour-integral evaluation of the phi functions (mean over roots of
    unity shifted around each dt*lam), stable near dt*lam = 0.
    """
    z = dt * np.asarray(lam)
    E = np.exp(z)
    E2 = np.exp(0.5 * z)
    theta = np.exp(1j * np.pi * (np.arange(_CONTOUR_POINTS) + 0.5) / _CONTOUR_POINTS)
    zr = z[..., None] + theta
    ez = np.exp(zr)
    Q = dt * ((np.exp(0.5 * zr) - 1.0) / zr).mean(-1).real
    f1 = dt * ((-4.0 - zr + ez * (4.0 - 3.0 * zr + zr**2)) / zr**3).mean(-1).real
    f2 = dt * ((2.0 + zr + ez * (zr - 2.0)) / zr**3).mean(-1).real
    f3 = dt * ((-4.0 - 3.0 * zr - zr**2 + ez * (4.0 - zr)) / zr**3).mean(-1).real
    return E, E2, Q, f1, f2, f3


class _KseCoupledRhs:
    """Explicit (non-stiff) part of the stacked KSE block system."""

    def __init__(self, model, gamma, c, mu_obs, active):
        self.model = model
        self.g2 = gamma[1]
        self.c2 = c[1]
        self.mu_obs = mu_obs  # mu * observation mask over modes
        self.active = active
        self.ik = model.ik
        self.k2 = model.k2
        self.k4 = model.k4
        self.mask = model.dealias

    def __call__(self, y):
        out = np.empty_like(y)
        u_phys = np.fft.ifft(y[0]).real
        out[0] = -0.5 * self.g2 * self.ik * (np.fft.fft(u_phys * u_phys) * self.mask)
        v_phys = np.fft.ifft(y[1]).real
        v2_hat = np.fft.fft(v_phys * v_phys) * self.mask
        out[1] = -0.5 * self.c2 * self.ik * v2_hat + self.mu_obs * y[0]
        for r, a in enumerate(self.active):
            w_phys = np.fft.ifft(y[2 + r]).real
            conv = np.fft.fft(v_phys * w_phys) * self.mask
            nw = -self.c2 * self.ik * conv
            if a == 0:
                nw = nw + self.k2 * y[1]
            elif a == 1:
                nw = nw - 0.5 * self.ik * v2_hat
            elif a == 2:
                nw = nw - self.k4 * y[1]
            out[2 + r] = nw
        return out


def _advance_kse(model, truth_model, u, v, w, gamma, c, cfg, op, active, n_full, rem):
    if not isinstance(truth_model, KuramotoSivashinsky) or truth_model.grid != model.grid:
        raise ConfigError("truth model must be a KSE variant on the same grid")
    mu_obs = op.mu_profile(cfg.mu)
    rhs = _KseCoupledRhs(model, gamma, c, mu_obs, active)

    lam = np.empty((2 + w.shape[0], model.grid))
    lam[0] = truth_model.linear_coeff(gamma)
    lam[1] = model.linear_coeff(c) - mu_obs
    if w.shape[0]:
        lam[2:] = lam[1]

    y = np.empty((2 + w.shape[0], model.grid), dtype=np.complex128)
    y[0], y[1] = u, v
    if w.shape[0]:
        y[2:] = w

    with np.errstate(over="ignore", invalid="ignore"):
        if n_full:
            weights = _etdrk4_coeffs(lam, cfg.dt)
            for _ in range(n_full):
                y = _etdrk4_step(y, rhs, weights)
        if rem:
            weights = _etdrk4_coeffs(lam, rem)
            y = _etdrk4_step(y, rhs, weights)
    _check_finite(y[0], y[1], y[2:])
    u[:], v[:] = y[0], y[1]
    if w.shape[0]:
        w[:] = y[2:]


def _etdrk4_step(y, nonlinear, weights):
    E, E2, Q, f1, f2, f3 = weights
    n0 = nonlinear(y)
    a = E2 * y + Q * n0
    na = nonlinear(a)
    b = E2 * y + Q * na
    nb = nonlinear(b)
    cc = E2 * a + Q * (2.0 * nb - n0)
    nc = nonlinear(cc)
    return E * y + f1 * n0 + 2.0 * f2 * (na + nb) + f3 * nc


def spectral_step(model, y, c, mu, op, forcing, dt, t=0.0):
    """One ETDRK4 step of the nudged KSE toward an external truth source.

    ``forcing`` is the truth spectrum: None (zero source), a single snapshot
    held constant across the step, or a callable t -> spectrum evaluated at
    the stage times.
    """
    if not isinstance(model, KuramotoSivashinsky):
        raise ConfigError("spectral_step applies to KSE models")
    c = model.check_params(c)
    y = model.check_state(np.asarray(y, dtype=np.complex128))
    mu_obs = op.mu_profile(mu)
    lam = model.linear_coeff(c) - mu_obs
    E, E2, Q, f1, f2, f3 = _etdrk4_coeffs(lam, dt)

    if forcing is None:
        u_of = lambda _t: 0.0
    elif callable(forcing):
        u_of = lambda _t: np.asarray(forcing(_t))
    else:
        snap = np.asarray(forcing, dtype=np.complex128)
        u_of = lambda _t: snap

    def nonlin(vhat, tt):
        return model.nonlinear_rhs(vhat, c) + mu_obs * u_of(tt)

    n0 = nonlin(y, t)
    a = E2 * y + Q * n0
    na = nonlin(a, t + 0.5 * dt)
    b = E2 * y + Q * na
    nb = nonlin(b, t + 0.5 * dt)
    cc = E2 * a + Q * (2.0 * nb - n0)
    nc = nonlin(cc, t + dt)
    out = E * y + f1 * n0 + 2.0 * f2 * (na + nb) + f3 * nc
    if not np.isfinite(out).all():
        raise DivergenceError("nudged")
    return out
