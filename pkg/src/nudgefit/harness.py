"""Experiment orchestration: the relax-then-punch loop and run logging.

A run alternates free evolution of the coupled system over ``dt_update`` with
instantaneous parameter updates. Between punches the sensitivity tangents
(DS mode) accumulate from zero; after each punch they are re-zeroed, which
matches their zero-initial-condition derivation and drops the exponentially
decaying initial-condition contribution.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, DivergenceError
from .estimation import (
    UpdateDiagnostics,
    UpdateRule,
    assemble_gn_matrix,
    assemble_gradient,
    chl_update,
    error_functional,
    update_gradient_descent,
    update_levenberg_marquardt,
    update_newton_root,
)
from .integrators import CoupledState, IntegratorConfig, advance_coupled
from .models.base import SensitivityStack, otf_observed_sensitivity
from .models.kse import KuramotoSivashinsky

SENSITIVITY_MODES = ("ds", "otf", "none")


@dataclass
class ExperimentConfig:
    model: object
    gamma: np.ndarray
    c0: np.ndarray
    mu: object
    dt_update: float
    t_final: float
    rule: UpdateRule
    sensitivity_mode: str = "otf"
    observation: object = None
    seed: int = 0
    truth_ic: object = None  # state array, or "random_normal"
    nudged_ic: object = None  # state array; zeros when omitted
    truth_model: object = None
    active_params: Optional[tuple] = None
    dt_inner: Optional[float] = None
    clamp_factor: float = 10.0
    dense_every: int = 0
    name: str = ""

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=float)
        self.c0 = np.asarray(self.c0, dtype=float)
        if self.sensitivity_mode not in SENSITIVITY_MODES:
            raise ConfigError(f"unknown sensitivity mode {self.sensitivity_mode!r}")
        if self.dt_update <= 0.0:
            raise ConfigError("dt_update must be positive")
        if self.t_final < self.dt_update:
            raise ConfigError("t_final must cover at least one update interval")
        if self.rule.kind in ("gd", "newton", "lm") and self.sensitivity_mode == "none":
            raise ConfigError(f"rule {self.rule.kind!r} needs ds or otf sensitivities")
        mu_min = float(np.min(np.asarray(self.mu)))
        if mu_min > 0.0 and self.dt_update < 10.0 / mu_min:
            warnings.warn(
                f"dt_update = {self.dt_update:g} is below the relax-then-punch "
                f"guideline 10/mu = {10.0 / mu_min:g}",
                stacklevel=2,
            )

    def integrator(self) -> IntegratorConfig:
        scheme = "spectral" if isinstance(self.model, KuramotoSivashinsky) else "rk4"
        return IntegratorConfig(dt=self.dt_inner or self.model.dt_default,
                                mu=self.mu, scheme=scheme)

    def active(self) -> tuple:
        if self.active_params is None:
            return tuple(range(self.model.param_count))
        return tuple(int(a) for a in self.active_params)


@dataclass
class UpdateRecord:
    t: float
    E: float
    c: np.ndarray
    param_err: float
    flags: str = ""


@dataclass
class RunLog:
    records: list = field(default_factory=list)
    dense: Optional[list] = None  # (t, ||I_h(v-u)||) samples
    param_count: int = 0
    completed: bool = True
    error: Optional[str] = None

    def times(self):
        return np.array([r.t for r in self.records])

    def errors(self):
        return np.array([r.E for r in self.records])

    def params(self):
        return np.array([r.c for r in self.records])

    def param_errors(self):
        return np.array([r.param_err for r in self.records])

    def dense_array(self):
        return np.array(self.dense) if self.dense else np.empty((0, 2))


def _initial_state(cfg, model, rng):
    if isinstance(cfg.truth_ic, str):
        if cfg.truth_ic != "random_normal":
            raise ConfigError(f"unknown truth initial condition {cfg.truth_ic!r}")
        if isinstance(model, KuramotoSivashinsky):
            u0 = model.field_to_state(rng.standard_normal(model.grid))
        else:
            u0 = rng.standard_normal(model.dimension)
    elif cfg.truth_ic is None:
        raise ConfigError("truth initial condition required")
    else:
        u0 = np.asarray(cfg.truth_ic, dtype=model.state_dtype)
    if cfg.nudged_ic is None:
        v0 = model.new_state()
    else:
        v0 = np.asarray(cfg.nudged_ic, dtype=model.state_dtype)
    return model.check_state(u0), model.check_state(v0)


def _apply_rule(cfg, model, op, state, c, active, stack, E):
    """One punch: evaluate the configured rule on the active subvector."""
    rule = cfg.rule
    diag = UpdateDiagnostics(E=E)
    c_act = c[list(active)]
    if rule.kind == "none":
        return c.copy(), diag
    if rule.kind == "chl":
        if not isinstance(model, KuramotoSivashinsky) or active != (0,):
            raise ConfigError("the chl rule applies to the single leading KSE parameter")
        mu_arr = np.asarray(cfg.mu, dtype=float)
        if mu_arr.size != 1:
            raise ConfigError("the chl rule needs a scalar mu")
        lv = model.second_derivative(state.nudged)
        new0, skipped = chl_update(c_act[0], state.nudged, state.truth, lv,
                                   float(mu_arr.reshape(())), op)
        new_act = np.array([new0])
        diag.skipped = skipped
    else:
        diag.gradient = assemble_gradient(state.nudged, state.truth, stack, op)
        if rule.kind == "gd":
            new_act = update_gradient_descent(c_act, diag.gradient, rule.r)
        elif rule.kind == "newton":
            new_act, skipped = update_newton_root(c_act, E, diag.gradient)
            diag.skipped = skipped
        else:  # lm
            diag.gn_matrix = assemble_gn_matrix(stack, op)
            new_act = update_levenberg_marquardt(c_act, diag.gradient,
                                                 diag.gn_matrix, rule.lam)
    diag.step = new_act - c_act
    c_new = c.copy()
    c_new[list(active)] = new_act

    factor = cfg.clamp_factor
    if factor and not diag.skipped:
        n_old = float(np.linalg.norm(c))
        n_new = float(np.linalg.norm(c_new))
        lo, hi = n_old / factor, n_old * factor
        if n_old > 0.0 and not (lo <= n_new <= hi):
            diag.clamped = True
            c_new = c.copy()
    return c_new, diag


def run_experiment(cfg: ExperimentConfig) -> RunLog:
    """Run the relax-then-punch loop to t_final; deterministic given the seed.

    Raises DivergenceError (with the partial log attached) if any subsystem
    goes non-finite.
    """
    model = cfg.model
    truth_model = cfg.truth_model or model
    op = cfg.observation or model.default_observation()
    icfg = cfg.integrator()
    active = cfg.active()
    mode = cfg.sensitivity_mode
    rng = np.random.default_rng(cfg.seed)
    u0, v0 = _initial_state(cfg, model, rng)

    n_updates = int(np.floor(cfg.t_final / cfg.dt_update + 1e-9))
    state = CoupledState(truth=u0, nudged=v0, sensitivities=None, time=0.0)
    c = cfg.c0.copy()
    gamma = cfg.gamma
    log = RunLog(param_count=model.param_count,
                 dense=[] if cfg.dense_every else None)

    steps_per_update = int(round(cfg.dt_update / icfg.dt))

    def advance_interval(st):
        if not cfg.dense_every:
            return advance_coupled(model, st, c, gamma, icfg, op, cfg.dt_update, mode,
                                   active=active, truth_model=truth_model)
        done = 0
        while done < steps_per_update:
            nsub = min(cfg.dense_every, steps_per_update - done)
            st = advance_coupled(model, st, c, gamma, icfg, op, nsub * icfg.dt, mode,
                                 active=active, truth_model=truth_model)
            done += nsub
            d = op.apply(st.nudged - st.truth)
            log.dense.append((st.time, np.sqrt(op.inner(d, d))))
        return st

    for _ in range(n_updates):
        try:
            state = advance_interval(state)
        except DivergenceError as exc:
            log.completed = False
            log.error = f"diverged in {exc.subsystem} at t <= {state.time + cfg.dt_update:g}"
            exc.runlog = log
            raise
        E = error_functional(state.nudged, state.truth, op)
        if mode == "ds":
            stack = state.sensitivities
        elif mode == "otf" and cfg.rule.kind in ("gd", "newton", "lm"):
            stack = otf_observed_sensitivity(model, state.nudged, c, cfg.mu, op, active)
        else:
            stack = None
        c, diag = _apply_rule(cfg, model, op, state, c, active, stack, E)
        log.records.append(UpdateRecord(
            t=state.time, E=E, c=c.copy(),
            param_err=float(np.linalg.norm(c - gamma)), flags=diag.flags()))
        if mode == "ds":
            zeros = np.zeros_like(state.sensitivities.columns)
            state = CoupledState(truth=state.truth, nudged=state.nudged,
                                 sensitivities=SensitivityStack(zeros, "ds", active),
                                 time=state.time)
    return log


# -- CSV persistence ----------------------------------------------------------

def write_run_log(log: RunLog, path, dense_path=None):
    """Write `t,E,c_1..c_n,param_err,flags` rows; floats via repr (round-trip exact)."""
    n = log.param_count
    header = ",".join(["t", "E"] + [f"c_{i + 1}" for i in range(n)] + ["param_err", "flags"])
    lines = [header]
    for r in log.records:
        cols = [repr(float(r.t)), repr(float(r.E))]
        cols += [repr(float(x)) for x in r.c]
        cols += [repr(float(r.param_err)), r.flags]
        lines.append(",".join(cols))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    if dense_path is not None and log.dense is not None:
        with open(dense_path, "w") as fh:
            fh.write("t,obs_err\n")
            for t, e in log.dense:
                fh.write(f"{t!r},{e!r}\n")


def read_run_log(path) -> RunLog:
    """Parse a CSV produced by write_run_log back into a RunLog."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0].split(",")
    n = len(header) - 4
    log = RunLog(param_count=n)
    for ln in lines[1:]:
        cols = ln.split(",")
        t, e = float(cols[0]), float(cols[1])
        c = np.array([float(x) for x in cols[2:2 + n]])
        perr = float(cols[2 + n])
        flags = cols[3 + n]
        log.records.append(UpdateRecord(t=t, E=e, c=c, param_err=perr, flags=flags))
    return log
