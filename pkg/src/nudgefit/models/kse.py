"""Kuramoto-Sivashinsky equation on a periodic domain, spectral representation.

States are full complex FFT spectra (numpy ordering) of a real field sampled
on ``grid`` points over [0, length); conjugate symmetry is the real-field
invariant. In explicit form the right-hand side is

    f(u; c) = -c1 u'' - c2 u u' - c3 u'''' (+ eps u^(6) for the perturbed variant)

whose linear terms are diagonal in Fourier space. The quadratic term is
evaluated pseudospectrally as (u^2)'/2 with 2/3-rule dealiasing. A nonzero
``epsilon`` adds the extra sixth-order dissipation used to generate
model-error truth data; the estimated parameter set stays (c1, c2, c3).
"""

from __future__ import annotations

import numpy as np

from ..observation import FourierModeObservation
from .base import Model


class KuramotoSivashinsky(Model):
    param_count = 3
    dt_default = 1e-2
    state_dtype = np.complex128

    def __init__(self, length=100.0, grid=1024, epsilon=0.0):
        if grid & (grid - 1):
            raise ValueError("grid size must be a power of two")
        if length <= 0:
            raise ValueError("domain length must be positive")
        self.length = float(length)
        self.grid = int(grid)
        self.epsilon = float(epsilon)
        self.name = "kse" if epsilon == 0.0 else "kse_perturbed"
        self.dimension = self.grid
        k_index = np.fft.fftfreq(self.grid, d=1.0 / self.grid)
        self.k_index = k_index
        self.wavenumbers = 2.0 * np.pi * k_index / self.length
        self.ik = 1j * self.wavenumbers
        self.k2 = self.wavenumbers**2
        self.k4 = self.k2**2
        self.k6 = self.k2 * self.k4
        self.dealias = np.abs(k_index) <= self.grid // 3
        self._weight = self.length / self.grid**2

    # -- layout helpers -------------------------------------------------

    def field_to_state(self, field):
        """Spectrum of a real field sampled on the model grid."""
        field = np.asarray(field, dtype=float)
        if field.shape != (self.grid,):
            raise ValueError(f"expected {self.grid} grid samples")
        return np.fft.fft(field)

    def state_to_field(self, x):
        return np.fft.ifft(np.asarray(x)).real

    def grid_points(self):
        return np.arange(self.grid) * (self.length / self.grid)

    def conjugate_symmetry_defect(self, x) -> float:
        """Max |u_hat(-k) - conj(u_hat(k))| relative to the spectrum scale."""
        x = np.asarray(x)
        defect = np.abs(x - np.conj(x[np.r_[0, self.grid - 1:0:-1]])).max()
        scale = max(np.abs(x).max(), 1.0)
        return float(defect / scale)

    # -- dynamics --------------------------------------------------------

    def linear_coeff(self, c):
        """Diagonal Fourier multiplier of the linear part of f (no nudging)."""
        c = self.check_params(c)
        lam = c[0] * self.k2 - c[2] * self.k4
        if self.epsilon != 0.0:
            lam = lam - self.epsilon * self.k6
        return lam

    def nonlinear_rhs(self, x, c):
        """Spectral tangent of -c2 u u', dealiased."""
        u = np.fft.ifft(x).real
        return -0.5 * c[1] * self.ik * (np.fft.fft(u * u) * self.dealias)

    def rhs(self, x, c):
        x = self.check_state(x)
        c = self.check_params(c)
        return self.linear_coeff(c) * x + self.nonlinear_rhs(x, c)

    def jacobian_vector_product(self, x, c, w):
        x = self.check_state(x)
        c = self.check_params(c)
        w = self.check_state(w)
        u = np.fft.ifft(x).real
        g = np.fft.ifft(w).real
        return self.linear_coeff(c) * w - c[1] * self.ik * (np.fft.fft(u * g) * self.dealias)

    def param_derivative(self, x, c, i):
        x = self.check_state(x)
        c = self.check_params(c)
        if i == 0:
            return self.k2 * x  # -u''
        if i == 1:
            u = np.fft.ifft(x).real
            return -0.5 * self.ik * (np.fft.fft(u * u) * self.dealias)  # -u u'
        if i == 2:
            return -self.k4 * x  # -u''''
        raise IndexError(f"parameter index {i} out of range for {self.name}")

    def second_derivative(self, x):
        """Spectral u'' (used by the closed-form single-parameter update)."""
        return -self.k2 * np.asarray(x)

    def inner(self, a, b) -> float:
        return self._weight * float(np.real(np.vdot(np.asarray(a), np.asarray(b))))

    def default_observation(self, cutoff=32):
        return FourierModeObservation(cutoff, self.grid, self.length)

    def default_initial_field(self):
        """Six-term trigonometric initial profile for the truth run."""
        x = self.grid_points()
        L = self.length
        return (
            np.sin(6 * np.pi * x / L)
            + 0.1 * np.cos(np.pi * x / L)
            - 0.2 * np.sin(3 * np.pi * x / L)
            + 0.05 * np.cos(15 * np.pi * x / L)
            + 0.7 * np.sin(18 * np.pi * x / L)
            - np.cos(13 * np.pi * x / L)
        )
