"""Error functional, sensitivity-based derivative assembly, and update rules.

All inner products go through the observation operator so that projected and
spectral layouts are weighted consistently. Update rules operate on the
active parameter subvector and are pure: they return the new values without
touching their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, SingularUpdateError

SKIP_THRESHOLD = 1e-14

RULE_KINDS = ("none", "gd", "newton", "lm", "chl")


@dataclass(frozen=True)
class UpdateRule:
    """Which parameter update to apply at each punch.

    kind: "none" (nudging only), "gd" (gradient descent, learning rate r),
    "newton" (accelerated root finding on the error functional), "lm"
    (Levenberg-Marquardt with damping lam; lam = 0 is Gauss-Newton), or "chl"
    (closed-form single-parameter update for a linear operator coefficient).
    """

    kind: str
    r: float = 30.0
    lam: float = 1e-6

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ConfigError(f"unknown update rule {self.kind!r}")
        if self.kind == "gd" and self.r <= 0.0:
            raise ConfigError("gradient descent needs a positive learning rate")
        if self.kind == "lm" and self.lam < 0.0:
            raise ConfigError("Levenberg-Marquardt damping must be non-negative")


@dataclass
class UpdateDiagnostics:
    """What a single punch computed and decided."""

    E: float
    gradient: Optional[np.ndarray] = None
    gn_matrix: Optional[np.ndarray] = None
    step: Optional[np.ndarray] = None
    skipped: bool = False
    clamped: bool = False

    def flags(self) -> str:
        out = []
        if self.skipped:
            out.append("skipped")
        if self.clamped:
            out.append("clamped")
        return "|".join(out)


def error_functional(v, u, op) -> float:
    """E = 1/2 ||I_h (v - u)||^2 in the layout's L2 inner product."""
    d = op.apply(np.asarray(v) - np.asarray(u))
    return 0.5 * op.inner(d, d)


def assemble_gradient(v, u, stack, op):
    """Gradient of E: component i is <I_h(v-u), I_h w_i>."""
    d = op.apply(np.asarray(v) - np.asarray(u))
    return np.array([op.inner(d, op.apply(col)) for col in stack.columns])


def assemble_gn_matrix(stack, op):
    """Gauss-Newton (Hessian) approximation: entry (i,j) = <I_h w_i, I_h w_j>."""
    cols = [op.apply(col) for col in stack.columns]
    m = len(cols)
    g = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            g[i, j] = op.inner(cols[i], cols[j])
            g[j, i] = g[i, j]
    return g


def update_gradient_descent(c, gradient, r):
    """c - r * gradient."""
    if r <= 0.0:
        raise ConfigError("learning rate must be positive")
    return np.asarray(c, dtype=float) - r * np.asarray(gradient)


def update_newton_root(c, E, gradient, threshold=SKIP_THRESHOLD):
    """Accelerated Newton root step on E, steepest-descent direction.

    c_i - (2E / ||grad||^2) grad_i; with one parameter this is the scalar
    double-multiplicity Newton step E/E'. Returns (new_c, skipped); the step
    is skipped when ||grad||^2 falls below ``threshold``.
    """
    c = np.asarray(c, dtype=float)
    gradient = np.asarray(gradient, dtype=float)
    gg = float(np.dot(gradient, gradient))
    if gg < threshold:
        return c.copy(), True
    return c - (2.0 * E / gg) * gradient, False


def update_levenberg_marquardt(c, gradient, gn_matrix, lam):
    """c - (gn + lam I)^{-1} gradient; lam = 0 is the Gauss-Newton solve."""
    if lam < 0.0:
        raise ConfigError("damping must be non-negative")
    c = np.asarray(c, dtype=float)
    gradient = np.asarray(gradient, dtype=float)
    a = np.asarray(gn_matrix, dtype=float) + lam * np.eye(len(c))
    try:
        step = np.linalg.solve(a, gradient)
    except np.linalg.LinAlgError as exc:
        raise SingularUpdateError(
            "Gauss-Newton matrix is singular; rerun with damping lam > 0"
        ) from exc
    return c - step


def chl_update(c, v, u, Lv, mu, op, threshold=SKIP_THRESHOLD):
    """Closed-form update for a single parameter multiplying a linear operator L.

    c + mu ||I_h(v-u)||^2 / <I_h(v-u), Lv>. Algebraically identical to the
    Newton root step fed with the asymptotic sensitivity w = -(1/mu) I_h Lv.
    Returns (new_c, skipped); skipped when the pairing in the denominator is
    below ``threshold`` in magnitude.
    """
    d = op.apply(np.asarray(v) - np.asarray(u))
    denom = op.inner(d, np.asarray(Lv))
    if abs(denom) < threshold:
        return float(c), True
    return float(c) + mu * op.inner(d, d) / denom, False
