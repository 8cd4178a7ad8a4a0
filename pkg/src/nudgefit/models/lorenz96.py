"""Two-layer Lorenz '96 model: I large-scale sites, each coupled to J fast variables.

Layout: x[:I] holds the large-scale ring u^l_k; x[I:] holds the small-scale
variables u^s_{kj} grouped by site, index I + k*J + j. The advection term is
u_{k+1} (u_{k-1} - u_{k+2}) with cyclic indices modulo I. Estimated parameters
are (c1, c2): the scale-coupling strength and the large-scale damping. The
per-mode damping rates d_j and the forcing constant are model constants.
"""

from __future__ import annotations

import numpy as np

from ..observation import LargeScaleObservation
from .base import Model


class Lorenz96TwoLayer(Model):
    name = "lorenz96"
    param_count = 2
    dt_default = 1e-3

    def __init__(self, big_count=40, small_per_site=5, damping=(0.2, 0.5, 1.0, 2.0, 5.0),
                 forcing=8.0):
        damping = np.asarray(damping, dtype=float)
        if damping.shape != (small_per_site,):
            raise ValueError("need one damping rate per small-scale variable")
        if np.any(damping <= 0.0):
            raise ValueError("damping rates must be positive")
        self.big_count = int(big_count)
        self.small_per_site = int(small_per_site)
        self.damping = damping
        self.forcing = float(forcing)
        self.dimension = self.big_count * (1 + self.small_per_site)

    def split(self, x):
        """View a state as (large (I,), small (I, J))."""
        big = self.big_count
        return x[:big], x[big:].reshape(big, self.small_per_site)

    def _site_sum(self, small):
        # sequential sum over j, matching the compiled kernel's accumulation order
        s = small[:, 0].copy()
        for j in range(1, self.small_per_site):
            s += small[:, j]
        return s

    def rhs(self, x, c):
        x = self.check_state(x)
        c = self.check_params(c)
        xl, xs = self.split(x)
        adv = np.roll(xl, -1) * (np.roll(xl, 1) - np.roll(xl, -2))
        out = np.empty_like(x)
        ol, os = self.split(out)
        ol[:] = adv + c[0] * self._site_sum(xs) * xl - c[1] * xl + self.forcing
        os[:] = -self.damping * xs - c[0] * (xl**2)[:, None]
        return out

    def jacobian_vector_product(self, x, c, w):
        x = self.check_state(x)
        c = self.check_params(c)
        w = self.check_state(w)
        xl, xs = self.split(x)
        wl, ws = self.split(w)
        adv = np.roll(wl, -1) * (np.roll(xl, 1) - np.roll(xl, -2)) + np.roll(xl, -1) * (
            np.roll(wl, 1) - np.roll(wl, -2)
        )
        out = np.empty_like(w)
        ol, os = self.split(out)
        ol[:] = adv + c[0] * (self._site_sum(ws) * xl + self._site_sum(xs) * wl) - c[1] * wl
        os[:] = -self.damping * ws - 2.0 * c[0] * (xl * wl)[:, None]
        return out

    def param_derivative(self, x, c, i):
        x = self.check_state(x)
        self.check_params(c)
        xl, xs = self.split(x)
        out = np.zeros_like(x)
        ol, os = self.split(out)
        if i == 0:
            ol[:] = self._site_sum(xs) * xl
            os[:] = -((xl**2)[:, None])
        elif i == 1:
            ol[:] = -xl
        else:
            raise IndexError(f"parameter index {i} out of range for {self.name}")
        return out

    def default_observation(self):
        return LargeScaleObservation(self.big_count, self.big_count * self.small_per_site)
