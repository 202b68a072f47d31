"""Chirped-crystal geometry, phase mismatch, and the four amplitude routes."""

from __future__ import annotations

import math

import numpy as np
import pytest

import biphoton as bp
from biphoton.errors import CrystalSpecError, DegenerateConfigError

from conftest import REFERENCE


class TestPolingPeriod:
    def test_face_readouts(self, spec_pos):
        half = 0.5 * spec_pos.length_cm
        lam_in = bp.local_poling_period(spec_pos, -half)
        lam_out = bp.local_poling_period(spec_pos, +half)
        # 4 significant figures
        assert lam_in == pytest.approx(REFERENCE["poling_um_input"], abs=5e-3)
        assert lam_out == pytest.approx(REFERENCE["poling_um_output"], abs=5e-3)

    def test_centre_is_nominal_period(self, spec_pos):
        expected = 2 * math.pi / spec_pos.grating_k0 * 1e4
        assert bp.local_poling_period(spec_pos, 0.0) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(REFERENCE["poling_um_centre"], abs=5e-3)

    def test_outside_crystal(self, spec_pos):
        with pytest.raises(CrystalSpecError):
            bp.local_poling_period(spec_pos, 0.5)

    def test_flip_exchanges_faces(self, spec_pos, spec_neg):
        half = 0.5 * spec_pos.length_cm
        assert bp.local_poling_period(spec_neg, -half) == pytest.approx(
            bp.local_poling_period(spec_pos, +half), rel=1e-12
        )

    def test_overchirped_spec_rejected(self):
        with pytest.raises(CrystalSpecError, match="changes sign"):
            bp.CrystalSpec(aperiodicity=4000.0)


class TestPhaseMismatch:
    def test_zero_detuning_all_modes(self, spec_pos, summary, library):
        for mode in ("exact", "quadratic", "linear"):
            got = bp.phase_mismatch(spec_pos, summary, 0.0, mode, library)
            assert got == pytest.approx(summary.mismatch0, rel=1e-9)

    def test_quadratic_minus_linear(self, spec_pos, summary, band_half_width):
        w = band_half_width
        quad = bp.phase_mismatch(spec_pos, summary, w, "quadratic")
        lin = bp.phase_mismatch(spec_pos, summary, w, "linear")
        assert quad - lin == pytest.approx(summary.gvd_mean * w * w, rel=1e-12)

    def test_exact_close_to_quadratic_at_band_edge(
        self, spec_pos, summary, library, band_half_width
    ):
        w = band_half_width
        exact = bp.phase_mismatch(spec_pos, summary, w, "exact", library)
        quad = bp.phase_mismatch(spec_pos, summary, w, "quadratic")
        assert abs(exact - quad) <= 2.0 * abs(summary.gvd_mean * w * w)


class TestAmplitudes:
    def test_periodic_crystal_is_sinc(self, summary, library):
        periodic = bp.CrystalSpec(aperiodicity=0.0)
        grid = bp.default_detuning_grid(periodic, summary, "linear", count=2**12)
        amp = bp.tpsa_numeric(periodic, summary, grid, "linear", library)
        w = grid.samples()
        expected = np.abs(np.sinc(summary.gvm * w * periodic.length_cm / 2 / np.pi))
        assert np.max(np.abs(np.abs(amp.values) - expected)) < 1e-8

    def test_linear_quadrature_matches_erf_form(self, spec_pos, summary, library):
        grid = bp.default_detuning_grid(spec_pos, summary, "linear", count=2**13)
        quad = bp.tpsa_numeric(spec_pos, summary, grid, "linear", library)
        closed = bp.tpsa_closed_form_curve(spec_pos, summary, grid, "erf")
        rel = np.abs(quad.values - closed.values) / np.abs(closed.values)
        assert rel.max() <= 1e-6

    def test_erf_modulus_even(self, spec_pos, summary):
        w = np.linspace(1e12, 8e14, 400)
        plus = bp.tpsa_closed_form(spec_pos, summary, w, "erf")
        minus = bp.tpsa_closed_form(spec_pos, summary, -w, "erf")
        assert np.max(np.abs(np.abs(plus) - np.abs(minus))) < 1e-12

    def test_rect_half_width(self, spec_pos, summary, band_half_width):
        inside = bp.tpsa_closed_form(spec_pos, summary, 0.999 * band_half_width, "rect")
        outside = bp.tpsa_closed_form(spec_pos, summary, 1.001 * band_half_width, "rect")
        assert abs(inside) == pytest.approx(1.0, rel=1e-12)
        assert outside == 0.0
        # nominal arithmetic: 960 rad/cm over the walk-off
        assert band_half_width == pytest.approx(2.89e14, rel=0.01)

    def test_erf_approaches_rect_at_strong_chirp(self, summary):
        # at 10x the reference chirp the plateau of the erf form is within a
        # few percent of the rectangle over the central half of the band
        strong = bp.CrystalSpec(aperiodicity=12000.0, grating_k0=12000.0)
        half_width = strong.aperiodicity * strong.length_cm / abs(summary.gvm)
        w = np.linspace(-0.5 * half_width, 0.5 * half_width, 4001)
        values = bp.tpsa_closed_form(strong, summary, w, "erf")
        deviation = np.abs(np.abs(values) / 2.0 - 1.0)
        assert deviation.max() < 0.03

    def test_flip_preserves_modulus_and_reverses_chirp(
        self, spec_pos, spec_neg, summary, band_half_width
    ):
        w = np.linspace(-0.8 * band_half_width, 0.8 * band_half_width, 2001)
        plus = bp.tpsa_closed_form(spec_pos, summary, w, "erf")
        minus = bp.tpsa_closed_form(spec_neg, summary, w, "erf")
        assert np.max(np.abs(np.abs(plus) - np.abs(minus))) < 1e-12
        expected_c2 = summary.gvm**2 / (4 * spec_pos.aperiodicity)
        for values, sign in ((plus, +1), (minus, -1)):
            phase = np.unwrap(np.angle(values))
            coeff = np.polyfit(w, phase, 2)[0]
            assert coeff == pytest.approx(sign * expected_c2, rel=0.02)

    def test_doubling_chirp_doubles_band(self, spec_pos, summary, library):
        widths = []
        for factor in (1.0, 2.0):
            spec = bp.CrystalSpec(aperiodicity=spec_pos.aperiodicity * factor)
            grid = bp.default_detuning_grid(spec, summary, "linear", count=2**13)
            amp = bp.tpsa_numeric(spec, summary, grid, "linear", library)
            widths.append(bp.fwhm(np.abs(amp.values) ** 2, grid).width)
        assert widths[1] / widths[0] == pytest.approx(2.0, rel=0.02)

    def test_normalization_and_centre_phase(self, erf_pos, linear_quadrature_pos):
        for amp in (erf_pos, linear_quadrature_pos):
            assert np.max(np.abs(amp.values)) == pytest.approx(1.0, rel=1e-12)
            centre = np.argmin(np.abs(amp.grid.samples()))
            assert abs(np.angle(amp.values[centre])) < 1e-9

    def test_closed_form_degenerate_configs(self, summary):
        periodic = bp.CrystalSpec(aperiodicity=0.0)
        with pytest.raises(DegenerateConfigError):
            bp.tpsa_closed_form(periodic, summary, 0.0, "erf")
        zero_walkoff = bp.dispersion_summary(
            bp.CrystalSpec(signal_material="ktp_y", idler_material="ktp_y")
        )
        with pytest.raises(DegenerateConfigError):
            bp.tpsa_closed_form(bp.CrystalSpec(), zero_walkoff, 0.0, "erf")

    def test_rect_warns_for_weak_chirp(self, summary):
        weak = bp.CrystalSpec(aperiodicity=2.0)
        with pytest.warns(UserWarning, match="weak chirp"):
            bp.tpsa_closed_form(weak, summary, 0.0, "rect")


class TestConditionReport:
    def test_reference_ratios(self, spec_pos, summary):
        report = bp.condition_report(spec_pos, summary)
        assert report.gvd_ratio == pytest.approx(REFERENCE["gvd_ratio"], abs=0.02)
        expected_br = 4 * spec_pos.length_cm**2 * spec_pos.aperiodicity / math.pi**2
        assert report.broadening_ratio == pytest.approx(expected_br, rel=1e-12)
        assert report.broadening_ratio == pytest.approx(311.3, abs=0.5)
        assert report.broadening_ok and report.gvd_ok and report.edge_ok

    def test_periodic_crystal_fails_broadening(self, summary):
        report = bp.condition_report(bp.CrystalSpec(aperiodicity=0.0), summary)
        assert report.broadening_ratio == 0.0
        assert not report.broadening_ok

    def test_thresholds_configurable(self, spec_pos, summary):
        report = bp.condition_report(spec_pos, summary, gvd_threshold=0.1)
        assert not report.gvd_ok
