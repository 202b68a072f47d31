"""End-to-end acceptance of the shipped default configuration.

Every test exercises one acceptance criterion at its stated tolerance against
the published design figures for the chirped-KTP compression setup, and
prints one PASS/FAIL line (run with ``-s`` to see the lines for passing
criteria as well).  All spectral amplitudes here use the full 2^16-point
production grids.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

import biphoton as bp
from biphoton.dispersion import SPEED_OF_LIGHT_CM_S

from conftest import REFERENCE


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def _signal_wavelength_nm(omega0: float, detuning: float) -> float:
    return 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / (omega0 + detuning) * 1e7


@pytest.fixture(scope="module")
def compressed_minimum(erf_neg, fibre, summary, spec_neg):
    """Golden-section width minimum of the chirp-compensated wavepacket."""
    l_opt = bp.optimal_length(summary, spec_neg, fibre)
    return bp.refine_minimum(erf_neg, fibre, l_opt - 1.0, l_opt + 1.0, pad_factor=16)


def test_01_poling_period_readout(spec_pos):
    half = 0.5 * spec_pos.length_cm
    lam_in = bp.local_poling_period(spec_pos, -half)
    lam_out = bp.local_poling_period(spec_pos, +half)
    ok = (
        abs(lam_in - REFERENCE["poling_um_input"]) <= 5e-3
        and abs(lam_out - REFERENCE["poling_um_output"]) <= 5e-3
    )
    _report(1, ok, f"poling period {lam_in:.4f} / {lam_out:.4f} um "
                   f"(targets 18.47 / 42.40 to 4 significant figures)")


def test_02_crystal_gvd_ratio(spec_pos, summary):
    ratio = bp.condition_report(spec_pos, summary).gvd_ratio
    ok = abs(ratio - REFERENCE["gvd_ratio"]) <= 0.02
    _report(2, ok, f"|gvd_mean*L*a/gvm^2| = {ratio:.4f} (target 0.16 +- 0.02)")


def test_03_quasiphasematching_consistency(summary):
    ok = abs(summary.mismatch0 - REFERENCE["mismatch0"]) <= 0.015 * abs(
        REFERENCE["mismatch0"]
    )
    _report(3, ok, f"degenerate mismatch {summary.mismatch0:.1f} rad/cm "
                   f"(target -2441.8 within 1.5%)")


def test_04_fibre_half_gvd(fibre, summary, library):
    _, kq = bp.fibre_constants(fibre, summary.omega0, library)
    ok = abs(kq - REFERENCE["silica_half_gvd"]) <= 0.02 * REFERENCE["silica_half_gvd"]
    _report(4, ok, f"fused-silica half-GVD {kq:.4e} s^2/cm "
                   f"(target 1.359e-28 within 2%)")


def test_05_broadband_spectrum(exact_pos, exact_alpha0, spec_pos, summary):
    band = 2.0 * abs(spec_pos.aperiodicity) * spec_pos.length_cm / abs(summary.gvm)
    rep = bp.fwhm(np.abs(exact_pos.values) ** 2, exact_pos.grid)
    rep0 = bp.fwhm(np.abs(exact_alpha0.values) ** 2, exact_alpha0.grid)

    rect_like = abs(rep.width / band - 1.0) <= 0.15
    edge_short = _signal_wavelength_nm(summary.omega0, rep.lobe_hi)
    edge_long = _signal_wavelength_nm(summary.omega0, rep.lobe_lo)
    short_ok = abs(edge_short - 800.0) <= 30.0
    long_ok = abs(edge_long - 1200.0) <= 30.0
    factor = rep.width / rep0.width
    factor_ok = factor > 100.0

    ok = rect_like and short_ok and long_ok and factor_ok
    _report(
        5,
        ok,
        "full-dispersion spectrum: "
        f"FWHM/band = {rep.width / band:.3f} (rectangular {'OK' if rect_like else 'BAD'}); "
        f"half-power edges {edge_short:.1f} nm ({'OK' if short_ok else 'MISS'} 800+-30) / "
        f"{edge_long:.1f} nm ({'OK' if long_ok else 'MISS'} 1200+-30); "
        f"broadening x{factor:.0f} ({'OK' if factor_ok else 'BAD'} >100). "
        "The long-edge target is not reachable from any KTP dispersion set "
        "consistent with criteria 2/3/7; see README (known discrepancies).",
    )


def test_06_correlation_width_unchanged_by_chirp(
    linear_quadrature_pos, linear_quadrature_alpha0, spec_pos, summary
):
    box = summary.gvm * spec_pos.length_cm
    w_chirped = bp.to_time(linear_quadrature_pos).fwhm_s
    w_periodic = bp.to_time(linear_quadrature_alpha0).fwhm_s
    ok = (
        abs(w_chirped - w_periodic) <= 0.05 * w_periodic
        and abs(w_chirped - box) <= 0.05 * box
        and abs(w_periodic - box) <= 0.05 * box
    )
    _report(6, ok, f"correlation widths {w_chirped * 1e12:.4f} / "
                   f"{w_periodic * 1e12:.4f} ps (chirped vs periodic, both ~ "
                   f"{box * 1e12:.4f} ps, within 5%)")


def test_07_compression_length(summary, spec_neg, fibre):
    length = bp.optimal_length(summary, spec_neg, fibre)
    ok = abs(length - REFERENCE["l_opt_cm"]) <= 0.05 * REFERENCE["l_opt_cm"]
    _report(7, ok, f"chirp-cancelling length {length:.3f} cm "
                   f"(target 16.927 within 5%)")


def test_08_sweep_minimum_and_shape(
    erf_pos, erf_neg, fibre, summary, spec_neg, compressed_minimum
):
    lengths = np.linspace(0.0, 50.0, 201)
    up = bp.sweep_fibre(erf_pos, fibre, lengths)
    l_opt = bp.optimal_length(summary, spec_neg, fibre)
    best = compressed_minimum

    loc_ok = abs(best.length_cm - l_opt) <= 0.05 * l_opt
    width_fs = best.fwhm_s * 1e15
    width_ok = abs(width_fs - REFERENCE["compressed_fwhm_fs"]) <= 0.2 * REFERENCE[
        "compressed_fwhm_fs"
    ]
    side_ok = 0.5 * REFERENCE["sinc_first_sidelobe"] <= best.sidelobe_ratio <= 2.0 * (
        REFERENCE["sinc_first_sidelobe"]
    )
    widths_up = [p.fwhm_s for p in up]
    mono_ok = all(b >= a * 0.999 for a, b in zip(widths_up, widths_up[1:]))

    ok = loc_ok and width_ok and side_ok and mono_ok
    _report(
        8,
        ok,
        f"minimum {width_fs:.2f} fs at {best.length_cm:.3f} cm "
        f"(location within 5% of {l_opt:.3f}: {'OK' if loc_ok else 'BAD'}; "
        f"width 12 fs +-20%: {'OK' if width_ok else 'BAD'}); "
        f"first side lobe {best.sidelobe_ratio:.4f} (4.7% within factor 2: "
        f"{'OK' if side_ok else 'BAD'}); wrong-sign sweep nondecreasing: "
        f"{'OK' if mono_ok else 'BAD'}",
    )


def test_09_full_dispersion_compression(
    exact_pos, exact_neg, fibre, compressed_minimum
):
    w_pos = bp.to_time(exact_pos).fwhm_s
    w_neg = bp.to_time(exact_neg).fwhm_s
    # grid-doubling stability bounds each width to 0.2%; a detectable
    # asymmetry must exceed twice the combined tolerance
    tolerance = 0.002 * (w_pos + w_neg)
    differ_ok = abs(w_pos - w_neg) > 2.0 * tolerance

    points = bp.sweep_fibre(exact_neg, fibre, np.linspace(5.0, 35.0, 31))
    i = int(np.argmin([p.fwhm_s for p in points]))
    best = bp.refine_minimum(
        exact_neg, fibre, points[max(0, i - 1)].length_cm,
        points[min(len(points) - 1, i + 1)].length_cm,
    )
    broader_ok = best.fwhm_s > compressed_minimum.fwhm_s
    narrowing = w_neg / best.fwhm_s
    narrowing_ok = narrowing > 10.0

    ok = differ_ok and broader_ok and narrowing_ok
    _report(
        9,
        ok,
        f"full-dispersion widths at zero length {w_pos * 1e15:.1f} / "
        f"{w_neg * 1e15:.1f} fs (chirp signs differ: {'OK' if differ_ok else 'BAD'}); "
        f"compressed minimum {best.fwhm_s * 1e15:.2f} fs at {best.length_cm:.2f} cm "
        f"> idealized {compressed_minimum.fwhm_s * 1e15:.2f} fs: "
        f"{'OK' if broader_ok else 'BAD'}; narrowing x{narrowing:.1f} "
        f"(>10: {'OK' if narrowing_ok else 'BAD'})",
    )


def test_10_property_bundle(
    erf_neg, linear_quadrature_pos, erf_pos, spec_pos, spec_neg, summary,
    fibre, library, band_half_width, compressed_minimum,
):
    checks = []

    # energy conservation through the transform
    timed = bp.to_time(erf_neg)
    parseval = abs(erf_neg.power() - timed.power()) / erf_neg.power()
    checks.append(("parseval", parseval <= 1e-10, f"{parseval:.2e}"))

    # closed form against quadrature, everywhere on the production grid
    rel = np.abs(linear_quadrature_pos.values - erf_pos.values) / np.abs(erf_pos.values)
    checks.append(("erf-vs-quadrature", rel.max() <= 1e-6, f"{rel.max():.2e}"))

    # adding a pure delay must not change the measured width
    base = bp.to_time(erf_neg)
    delay = 2000 * base.grid.step
    shifted = bp.SpectralAmplitude(
        erf_neg.grid,
        erf_neg.values * np.exp(1j * erf_neg.grid.samples() * delay),
        erf_neg.omega0,
    )
    moved = bp.to_time(shifted)
    drift = abs(moved.fwhm_s - base.fwhm_s) / base.fwhm_s
    checks.append(("pure-delay", drift <= 1e-3, f"{drift:.2e}"))

    # transform-limit bound, reached at the chirp-cancelling length
    rect = bp.tpsa_closed_form_curve(spec_neg, summary, erf_neg.grid, "rect")
    l_opt = bp.optimal_length(summary, spec_neg, fibre)
    limit = 5.566 / (2.0 * band_half_width)
    at_opt = bp.to_time(bp.apply_fibre(rect, fibre, l_opt), pad_factor=16).fwhm_s
    best = bp.refine_minimum(rect, fibre, l_opt - 0.5, l_opt + 0.5, pad_factor=16)
    bound_ok = best.fwhm_s >= 0.999 * limit and abs(at_opt - limit) <= 0.02 * limit
    checks.append(
        ("transform-limit", bound_ok, f"min {best.fwhm_s * 1e15:.3f} fs vs "
                                      f"bound {limit * 1e15:.3f} fs")
    )

    # grid doubling must leave reported widths unchanged to 0.2%
    grid2 = bp.default_detuning_grid(spec_pos, summary, "linear", count=2**17)
    w_box = bp.to_time(linear_quadrature_pos).fwhm_s
    w_box2 = bp.to_time(
        bp.tpsa_numeric(spec_pos, summary, grid2, "linear", library)
    ).fwhm_s
    erf2 = bp.tpsa_closed_form_curve(spec_neg, summary, grid2, "erf")
    w_min2 = bp.to_time(bp.apply_fibre(erf2, fibre, compressed_minimum.length_cm)).fwhm_s
    w_min = bp.to_time(
        bp.apply_fibre(erf_neg, fibre, compressed_minimum.length_cm)
    ).fwhm_s
    stability = max(
        abs(w_box2 - w_box) / w_box, abs(w_min2 - w_min) / w_min
    )
    checks.append(("grid-doubling", stability <= 0.002, f"{stability:.2e}"))

    ok = all(c[1] for c in checks)
    detail = "; ".join(f"{name} {'OK' if good else 'BAD'} ({info})"
                       for name, good, info in checks)
    _report(10, ok, detail)
