"""Two-photon spectral amplitudes of collinear down-conversion in linearly
chirped quasi-phasematched crystals, and their temporal compression by the
group-velocity dispersion of an ordinary fibre on one arm.

The hot quadrature loop runs in a compiled extension when available and a
numpy fallback otherwise; see ``biphoton.backend.BACKEND`` for which one is
active.
"""

__version__ = "1.0.0"

from .amplitudes import SpectralAmplitude, TemporalAmplitude
from .backend import BACKEND as KERNEL_BACKEND
from .crystal import (
    DEFAULT_GRID_COUNT,
    ConditionReport,
    CrystalSpec,
    broadening_ratio,
    condition_report,
    default_detuning_grid,
    local_poling_period,
    phase_mismatch,
    tpsa_closed_form,
    tpsa_closed_form_curve,
    tpsa_numeric,
)
from .dispersion import (
    SPEED_OF_LIGHT_CM_S,
    DispersionSummary,
    MaterialLibrary,
    MaterialModel,
    default_library,
    dispersion_summary,
    refractive_index,
    wavevector,
)
from .errors import (
    BiphotonError,
    ConfigError,
    ConvergenceError,
    CrystalSpecError,
    DegenerateConfigError,
    InvalidGridError,
    NoCompressionSolutionError,
    UnderResolvedError,
    WavelengthRangeError,
)
from .numerics import (
    ComplexCurve,
    UniformGrid,
    WidthReport,
    complex_erf,
    fourier_transform,
    fwhm,
    oscillatory_quadrature,
)
from .propagation import (
    FibreSpec,
    SweepPoint,
    apply_fibre,
    fibre_constants,
    fibre_phase,
    optimal_length,
    refine_minimum,
    sweep_fibre,
    to_time,
)

__all__ = [
    "BiphotonError",
    "ComplexCurve",
    "ConditionReport",
    "ConfigError",
    "ConvergenceError",
    "CrystalSpec",
    "CrystalSpecError",
    "DEFAULT_GRID_COUNT",
    "DegenerateConfigError",
    "DispersionSummary",
    "FibreSpec",
    "InvalidGridError",
    "KERNEL_BACKEND",
    "MaterialLibrary",
    "MaterialModel",
    "NoCompressionSolutionError",
    "SPEED_OF_LIGHT_CM_S",
    "SpectralAmplitude",
    "SweepPoint",
    "TemporalAmplitude",
    "UnderResolvedError",
    "UniformGrid",
    "WavelengthRangeError",
    "WidthReport",
    "apply_fibre",
    "broadening_ratio",
    "complex_erf",
    "condition_report",
    "default_detuning_grid",
    "default_library",
    "dispersion_summary",
    "fibre_constants",
    "fibre_phase",
    "fourier_transform",
    "fwhm",
    "local_poling_period",
    "optimal_length",
    "oscillatory_quadrature",
    "phase_mismatch",
    "refine_minimum",
    "refractive_index",
    "sweep_fibre",
    "to_time",
    "tpsa_closed_form",
    "tpsa_closed_form_curve",
    "tpsa_numeric",
]
