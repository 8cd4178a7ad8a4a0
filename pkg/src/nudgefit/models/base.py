"""Shared model interface and the on-the-fly observed-sensitivity formula.

States and tangents are plain numpy arrays with a model-defined layout;
parameter vectors are float arrays of length ``param_count``. Models are
immutable after construction and all operations are pure functions of their
arguments, so instances can be shared freely between concurrent runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError


@dataclass(frozen=True)
class SensitivityStack:
    """A bundle of parameter-sensitivity tangent vectors.

    ``columns[i]`` is the tangent for parameter ``param_indices[i]`` and has
    the owning model's state layout. ``source`` records how the stack was
    produced: "ds" (integrated sensitivity equations) or "otf" (asymptotic
    observed-subspace approximation).
    """

    columns: np.ndarray
    source: str
    param_indices: tuple

    def __post_init__(self):
        if self.source not in ("ds", "otf"):
            raise ValueError(f"unknown sensitivity source {self.source!r}")
        if len(self.param_indices) != self.columns.shape[0]:
            raise DimensionError("one column per tracked parameter required")


class Model:
    """Parametric dynamical system in explicit form x' = f(x; c).

    Subclasses define the state layout and provide ``rhs``, the
    Jacobian-vector product of ``rhs`` in x, and the partial derivative of
    ``rhs`` with respect to each parameter. ``inner`` is the L2 inner product
    of the state layout (plain dot product unless overridden).
    """

    name = "model"
    dimension = 0
    param_count = 0
    dt_default = 1e-3
    state_dtype = np.float64

    def rhs(self, x, c):
        raise NotImplementedError

    def jacobian_vector_product(self, x, c, w):
        raise NotImplementedError

    def param_derivative(self, x, c, i):
        raise NotImplementedError

    def inner(self, a, b) -> float:
        return float(np.dot(np.asarray(a), np.asarray(b)))

    def default_observation(self):
        raise NotImplementedError

    def new_state(self):
        return np.zeros(self.dimension, dtype=self.state_dtype)

    def check_state(self, x):
        x = np.asarray(x)
        if x.shape != (self.dimension,):
            raise DimensionError(
                f"{self.name} expects state length {self.dimension}, got shape {x.shape}"
            )
        return x

    def check_params(self, c):
        c = np.asarray(c, dtype=float)
        if c.shape != (self.param_count,):
            raise DimensionError(
                f"{self.name} expects {self.param_count} parameters, got shape {c.shape}"
            )
        return c


def otf_observed_sensitivity(model, v, c, mu, op, active=None) -> SensitivityStack:
    """Leading-order large-mu approximation of the observed sensitivities.

    Column i is (1/mu) I_h df/dc_i evaluated at the current nudged state; for
    per-component mu the division is componentwise. Requires mu > 0 on every
    observed component. ``active`` selects a subset of parameter indices
    (default: all).
    """
    v = model.check_state(v)
    c = model.check_params(c)
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(mu_arr <= 0.0):
        raise ValueError("mu must be positive for the asymptotic approximation")
    if active is None:
        active = tuple(range(model.param_count))
    cols = np.empty((len(active), model.dimension), dtype=model.state_dtype)
    for row, i in enumerate(active):
        cols[row] = op.apply(model.param_derivative(v, c, i)) / mu_arr
    return SensitivityStack(columns=cols, source="otf", param_indices=tuple(active))
