"""Spectral- and time-domain two-photon amplitude containers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import UniformGrid, _as_complex_values


@dataclass(frozen=True)
class SpectralAmplitude:
    """Two-photon spectral amplitude F on a uniform detuning grid.

    ``grid`` holds detunings from the degenerate frequency (rad/s); the
    signal sits at omega0 + detuning and the idler at omega0 - detuning.
    |values|^2 is the (normalized) spectrum.
    """

    grid: UniformGrid
    values: np.ndarray
    omega0: float
    warnings: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "values", _as_complex_values(self.grid, self.values))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def power(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.step)


@dataclass(frozen=True)
class TemporalAmplitude:
    """Time-domain two-photon amplitude on a uniform delay grid (s).

    |values|^2 is the second-order correlation function; its main-lobe
    width, side-lobe ratio and peak/centroid positions are precomputed.
    Width analysis treats the grid as periodic (it is DFT output), so large
    group delays wrap without corrupting the measured shape.
    """

    grid: UniformGrid
    values: np.ndarray
    fwhm_s: float
    sidelobe_ratio: float
    peak_tau_s: float
    centroid_tau_s: float
    multimodal: bool
    warnings: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "values", _as_complex_values(self.grid, self.values))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def correlation(self) -> np.ndarray:
        """G2(tau) = |F(tau)|^2 (unnormalized)."""
        return np.abs(self.values) ** 2

    def power(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.step)
