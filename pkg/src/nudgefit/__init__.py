"""Parameter estimation for dynamical systems via continuous data assimilation.

A nudged copy of a partially observed system is synchronized to the truth
with a feedback term -mu I_h (v - u); parameter sensitivities (integrated
directly or approximated on the fly from the large-mu asymptotics) drive
gradient-descent, Newton-root, and Levenberg-Marquardt updates in a
relax-then-punch loop.
"""

from .errors import ConfigError, DimensionError, DivergenceError, SingularUpdateError
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
from .harness import ExperimentConfig, RunLog, read_run_log, run_experiment, write_run_log
from .integrators import (
    CoupledState,
    IntegratorConfig,
    advance_coupled,
    rk4_step,
    spectral_step,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .models import (
    KuramotoSivashinsky,
    Lorenz63,
    Lorenz96TwoLayer,
    Model,
    SensitivityStack,
    canonical_params,
    otf_observed_sensitivity,
)
from .observation import (
    FourierModeObservation,
    IdentityObservation,
    LargeScaleObservation,
    ObservationOperator,
)
from .oracle import ds_sensitivity, fd_sensitivity_oracle
from .presets import preset_config, preset_names

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionError",
    "DivergenceError",
    "SingularUpdateError",
    "UpdateDiagnostics",
    "UpdateRule",
    "assemble_gn_matrix",
    "assemble_gradient",
    "chl_update",
    "error_functional",
    "update_gradient_descent",
    "update_levenberg_marquardt",
    "update_newton_root",
    "ExperimentConfig",
    "RunLog",
    "read_run_log",
    "run_experiment",
    "write_run_log",
    "CoupledState",
    "IntegratorConfig",
    "advance_coupled",
    "rk4_step",
    "spectral_step",
    "KERNEL_BACKEND",
    "KuramotoSivashinsky",
    "Lorenz63",
    "Lorenz96TwoLayer",
    "Model",
    "SensitivityStack",
    "canonical_params",
    "otf_observed_sensitivity",
    "FourierModeObservation",
    "IdentityObservation",
    "LargeScaleObservation",
    "ObservationOperator",
    "ds_sensitivity",
    "fd_sensitivity_oracle",
    "preset_config",
    "preset_names",
]
