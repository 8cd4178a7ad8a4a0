"""Command-line entry point: run one experiment and persist its log.

Exit codes: 0 success, 1 configuration error, 2 divergence (a partial log is
still written when --out was given).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import ConfigError, DivergenceError
from .estimation import UpdateRule
from .harness import ExperimentConfig, run_experiment, write_run_log
from .models import KuramotoSivashinsky, Lorenz63, Lorenz96TwoLayer, canonical_params
from .presets import L63_IC_TRUTH, preset_config, preset_names

_MODEL_DEFAULTS = {
    "lorenz63": lambda: ExperimentConfig(
        model=Lorenz63(), gamma=canonical_params(), c0=0.5 * canonical_params(),
        mu=100.0, dt_update=0.5, t_final=50.0, truth_ic=L63_IC_TRUTH,
        rule=UpdateRule("lm"), sensitivity_mode="otf"),
    "lorenz96": lambda: ExperimentConfig(
        model=Lorenz96TwoLayer(), gamma=np.array([0.01, 0.5]),
        c0=np.array([0.005, 0.25]), mu=50.0, dt_update=0.5, t_final=100.0,
        truth_ic="random_normal", rule=UpdateRule("lm"), sensitivity_mode="otf"),
    "kse": lambda: _kse_default(),
}


def _kse_default():
    model = KuramotoSivashinsky()
    return ExperimentConfig(
        model=model, gamma=np.ones(3), c0=2.0 * np.ones(3), mu=25.0,
        dt_update=0.5, t_final=60.0,
        truth_ic=model.field_to_state(model.default_initial_field()),
        rule=UpdateRule("lm"), sensitivity_mode="otf")


def _parse_config_file(path):
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line {raw.strip()!r} (want key=value)")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key] = value
    return out


_FLOAT_KEYS = {"mu", "dt_update", "t_final", "r", "lam", "clamp_factor", "dt_inner"}
_INT_KEYS = {"seed", "dense_every"}


def _apply_overrides(cfg, overrides):
    rule_kind, r, lam = cfg.rule.kind, cfg.rule.r, cfg.rule.lam
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "rule":
            rule_kind = value
        elif key == "r":
            r = float(value)
        elif key == "lam":
            lam = float(value)
        elif key == "sensitivity":
            cfg.sensitivity_mode = value
        elif key == "active_params":
            cfg.active_params = tuple(int(x) for x in str(value).split(",") if x != "")
        elif key in ("c0", "gamma"):
            setattr(cfg, key, np.array([float(x) for x in str(value).split(",")]))
        elif key in _FLOAT_KEYS:
            setattr(cfg, key, float(value))
        elif key in _INT_KEYS:
            setattr(cfg, key, int(value))
        else:
            raise ConfigError(f"unknown config key {key!r}")
    cfg.rule = UpdateRule(rule_kind, r=r, lam=lam)
    # re-run the dataclass validation with the overrides in place
    cfg.__post_init__()
    return cfg


def build_parser():
    p = argparse.ArgumentParser(
        prog="nudgefit",
        description="Parameter estimation via continuous data assimilation (nudging).")
    p.add_argument("--preset", help="named experiment (see --list-presets)")
    p.add_argument("--model", choices=sorted(_MODEL_DEFAULTS),
                   help="build a default config for this model instead of a preset")
    p.add_argument("--rule", choices=["gd", "newton", "lm", "chl", "none"])
    p.add_argument("--sensitivity", choices=["ds", "otf", "none"])
    p.add_argument("--mu", type=float)
    p.add_argument("--dt-update", dest="dt_update", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--dense-log", action="store_true",
                   help="also write <out>.dense.csv with the fine-grained observed error")
    p.add_argument("--config", help="flat key=value override file")
    p.add_argument("--list-presets", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_presets:
        print("\n".join(preset_names()))
        return 0
    try:
        if args.preset:
            cfg = preset_config(args.preset)
        elif args.model:
            cfg = _MODEL_DEFAULTS[args.model]()
        else:
            raise ConfigError("give --preset NAME or --model NAME (or --list-presets)")
        overrides = {}
        if args.config:
            overrides.update(_parse_config_file(args.config))
        for key in ("rule", "sensitivity", "mu", "dt_update", "t_final", "seed"):
            val = getattr(args, key)
            if val is not None:
                overrides[key] = val
        if args.dense_log and not cfg.dense_every:
            cfg.dense_every = 10
        cfg = _apply_overrides(cfg, overrides)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        log = run_experiment(cfg)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.out and exc.runlog is not None:
            _write(exc.runlog, args.out, args.dense_log)
        return 2

    if args.out:
        _write(log, args.out, args.dense_log)
    last = log.records[-1]
    c_str = " ".join(f"{x:.6g}" for x in last.c)
    print(f"{cfg.name or 'run'}: {len(log.records)} updates, final E={last.E:.3e}, "
          f"c=[{c_str}], param_err={last.param_err:.3e}")
    return 0


def _write(log, out, dense):
    dense_path = None
    if dense and log.dense is not None:
        stem = out[:-4] if out.endswith(".csv") else out
        dense_path = f"{stem}.dense.csv"
    write_run_log(log, out, dense_path)


if __name__ == "__main__":
    sys.exit(main())
