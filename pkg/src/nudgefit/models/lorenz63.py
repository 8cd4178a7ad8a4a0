"""Lorenz '63 system with parameters (c1, c2, c3) = (sigma, rho, beta)."""

from __future__ import annotations

import numpy as np

from ..observation import IdentityObservation
from .base import Model


def canonical_params():
    return np.array([10.0, 28.0, 8.0 / 3.0])


class Lorenz63(Model):
    name = "lorenz63"
    dimension = 3
    param_count = 3
    dt_default = 1e-3

    def rhs(self, x, c):
        x = self.check_state(x)
        c = self.check_params(c)
        return np.array(
            [
                -c[0] * (x[0] - x[1]),
                x[0] * (c[1] - x[2]) - x[1],
                x[0] * x[1] - c[2] * x[2],
            ]
        )

    def jacobian_vector_product(self, x, c, w):
        x = self.check_state(x)
        c = self.check_params(c)
        w = self.check_state(w)
        return np.array(
            [
                -c[0] * (w[0] - w[1]),
                w[0] * (c[1] - x[2]) - x[0] * w[2] - w[1],
                w[0] * x[1] + x[0] * w[1] - c[2] * w[2],
            ]
        )

    def param_derivative(self, x, c, i):
        x = self.check_state(x)
        self.check_params(c)
        if i == 0:
            return np.array([-(x[0] - x[1]), 0.0, 0.0])
        if i == 1:
            return np.array([0.0, x[0], 0.0])
        if i == 2:
            return np.array([0.0, 0.0, -x[2]])
        raise IndexError(f"parameter index {i} out of range for {self.name}")

    def default_observation(self):
        return IdentityObservation(self.dimension)
