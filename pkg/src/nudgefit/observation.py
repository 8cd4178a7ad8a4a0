"""Observation operators: linear self-adjoint projections onto the observed subspace.

Every operator used here is diagonal in the model's native layout (componentwise
0/1 mask), which makes idempotence and self-adjointness structural. Spectral
operators additionally carry the Parseval weighting of the physical L2 inner
product so that norms of Fourier-layout states match norms of the fields they
represent.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError


class ObservationOperator:
    """Diagonal projection I_h onto observed components.

    ``mask`` is a 0/1 array over the state layout; ``rank`` is the number of
    observed components. ``inner`` is the L2 inner product of the layout the
    operator acts on (plain dot product for real ODE layouts).
    """

    kind = "custom"

    def __init__(self, mask):
        self.mask = np.asarray(mask, dtype=float)
        self.rank = int(np.count_nonzero(self.mask))

    @property
    def dimension(self) -> int:
        return self.mask.shape[0]

    def apply(self, x):
        """Return I_h x. Accepts stacked tangents with the layout on the last axis."""
        x = np.asarray(x)
        if x.shape[-1] != self.mask.shape[0]:
            raise DimensionError(
                f"state length {x.shape[-1]} does not match operator dimension {self.mask.shape[0]}"
            )
        return x * self.mask

    def inner(self, a, b) -> float:
        """L2 inner product of two states/tangents in this layout."""
        return float(np.dot(np.asarray(a), np.asarray(b)))

    def norm2(self, x) -> float:
        return self.inner(x, x)

    def mu_profile(self, mu):
        """Componentwise nudging coefficients mu * I_h.

        ``mu`` may be a scalar or a per-component vector; the result is zero on
        unobserved components so that the nudging term is mu * I_h (v - u).
        """
        mu = np.asarray(mu, dtype=float)
        if mu.ndim == 0:
            return float(mu) * self.mask
        if mu.shape != self.mask.shape:
            raise DimensionError("per-component mu must match the state layout")
        return mu * self.mask


class IdentityObservation(ObservationOperator):
    """Full-state observation (I_h = identity)."""

    kind = "identity"

    def __init__(self, dimension):
        super().__init__(np.ones(dimension))


class LargeScaleObservation(ObservationOperator):
    """Observe only the large-scale block of a two-layer layout.

    Layout: ``x[:big_count]`` large-scale, remainder small-scale.
    """

    kind = "large_scale"

    def __init__(self, big_count, small_count):
        mask = np.zeros(big_count + small_count)
        mask[:big_count] = 1.0
        super().__init__(mask)
        self.big_count = big_count


class FourierModeObservation(ObservationOperator):
    """Projection onto the lowest Fourier modes of a spectral layout.

    Keeps coefficients with integer wavenumber |k| <= cutoff (both signs, plus
    the mean mode). States are full complex spectra in numpy FFT order for a
    real field on ``grid`` points over a domain of length ``length``.
    """

    kind = "low_fourier"

    def __init__(self, cutoff, grid, length):
        k_index = np.fft.fftfreq(grid, d=1.0 / grid)
        super().__init__(np.abs(k_index) <= cutoff)
        self.cutoff = int(cutoff)
        self.grid = int(grid)
        self.length = float(length)
        # Parseval factor: <a,b>_L2 = (L/N^2) sum_k a_k conj(b_k)
        self._weight = self.length / self.grid**2

    def apply(self, x):
        x = np.asarray(x)
        if x.shape[-1] != self.mask.shape[0]:
            raise DimensionError(
                f"spectrum length {x.shape[-1]} does not match grid {self.grid}"
            )
        return x * self.mask

    def inner(self, a, b) -> float:
        return self._weight * float(np.real(np.vdot(np.asarray(a), np.asarray(b))))
