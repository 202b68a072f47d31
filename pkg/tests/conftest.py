"""Shared fixtures: the reference chirped-KTP configuration and its heavier
spectral amplitudes, computed once per session."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import biphoton as bp

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# Nominal figures for the shipped default configuration (chirped KTP, 458 nm
# pump, fused-silica fibre on the idler).  Independent arithmetic oracles:
# the walk-off is recovered from the compression condition l = gvm^2/(4|a|kq).
REFERENCE = {
    "poling_um_input": 18.47,
    "poling_um_output": 42.40,
    "poling_um_centre": 25.73,
    "mismatch0": -2441.8,  # rad/cm
    "gvd_ratio": 0.16,
    "silica_half_gvd": 1.359e-28,  # s^2/cm
    "l_opt_cm": 16.927,
    "gvm_oracle": float(np.sqrt(4.0 * 1200.0 * 1.359e-28 * 16.927)),  # s/cm
    "compressed_fwhm_fs": 12.0,
    "sinc_first_sidelobe": 0.0472,
}


@pytest.fixture(scope="session")
def library():
    return bp.default_library()


@pytest.fixture(scope="session")
def spec_pos():
    return bp.CrystalSpec()


@pytest.fixture(scope="session")
def spec_neg(spec_pos):
    return spec_pos.flipped()


@pytest.fixture(scope="session")
def summary(spec_pos, library):
    return bp.dispersion_summary(spec_pos, library)


@pytest.fixture(scope="session")
def fibre():
    return bp.FibreSpec()


@pytest.fixture(scope="session")
def band_half_width(spec_pos, summary):
    """Half width |a|L/|gvm| of the chirped-grating emission band (rad/s)."""
    return abs(spec_pos.aperiodicity) * spec_pos.length_cm / abs(summary.gvm)


@pytest.fixture(scope="session")
def linear_grid(spec_pos, summary):
    return bp.default_detuning_grid(spec_pos, summary, "linear")


@pytest.fixture(scope="session")
def exact_grid(spec_pos, summary):
    return bp.default_detuning_grid(spec_pos, summary, "exact")


@pytest.fixture(scope="session")
def erf_pos(spec_pos, summary, linear_grid):
    return bp.tpsa_closed_form_curve(spec_pos, summary, linear_grid, "erf")


@pytest.fixture(scope="session")
def erf_neg(spec_neg, summary, linear_grid):
    return bp.tpsa_closed_form_curve(spec_neg, summary, linear_grid, "erf")


@pytest.fixture(scope="session")
def linear_quadrature_pos(spec_pos, summary, linear_grid, library):
    return bp.tpsa_numeric(spec_pos, summary, linear_grid, "linear", library)


@pytest.fixture(scope="session")
def linear_quadrature_alpha0(spec_pos, summary, linear_grid, library):
    periodic = bp.CrystalSpec(aperiodicity=0.0)
    return bp.tpsa_numeric(periodic, summary, linear_grid, "linear", library)


@pytest.fixture(scope="session")
def exact_pos(spec_pos, summary, exact_grid, library):
    return bp.tpsa_numeric(spec_pos, summary, exact_grid, "exact", library)


@pytest.fixture(scope="session")
def exact_neg(spec_neg, summary, exact_grid, library):
    return bp.tpsa_numeric(spec_neg, summary, exact_grid, "exact", library)


@pytest.fixture(scope="session")
def exact_alpha0(summary, exact_grid, library):
    periodic = bp.CrystalSpec(aperiodicity=0.0)
    return bp.tpsa_numeric(periodic, summary, exact_grid, "exact", library)
