"""Command-line front end: figure-ready CSV/JSON data for spectra, correlation
functions, fibre-length sweeps, the compression design point, and validity
checks.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.  Errors
are emitted as one JSON object on stderr.  Output files are written
atomically and every CSV carries the resolved-config hash on its first line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import replace

import numpy as np

from . import __version__
from .amplitudes import SpectralAmplitude, TemporalAmplitude
from .config import RunConfig, default_config, parse_config
from .crystal import (
    condition_report,
    default_detuning_grid,
    local_poling_period,
    tpsa_closed_form_curve,
    tpsa_numeric,
)
from .dispersion import SPEED_OF_LIGHT_CM_S, dispersion_summary
from .errors import BiphotonError, ConfigError, NoCompressionSolutionError
from .propagation import (
    apply_fibre,
    fibre_constants,
    optimal_length,
    refine_minimum,
    sweep_fibre,
    to_time,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_MAX_CSV_ROWS = 16384


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton",
        description="Two-photon spectra from chirped quasi-phasematched "
        "crystals and their compression in dispersive fibres.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (defaults are built in)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--alpha-sign",
            choices=["+", "-"],
            help="force the sign of the poling chirp",
        )
        p.add_argument(
            "--fibre-model",
            choices=["quadratic", "full"],
            help="override the fibre phase model",
        )
        p.add_argument(
            "--tpsa-mode",
            choices=["exact", "quadratic", "linear", "erf", "rect"],
            help="how the spectral amplitude is computed",
        )

    p = sub.add_parser("spectrum", help="signal/idler spectrum vs wavelength")
    common(p)
    p = sub.add_parser("g2", help="second-order correlation function vs delay")
    common(p)
    p.add_argument(
        "--length-cm",
        type=float,
        action="append",
        help="fibre length in cm (repeatable; default 0)",
    )
    p = sub.add_parser("sweep", help="correlation width vs fibre length, both chirp signs")
    common(p)
    p.add_argument(
        "--lengths-cm",
        default="0:50:201",
        help="sweep grid as start:stop:count (cm)",
    )
    p = sub.add_parser("design", help="dispersion constants and compression length")
    common(p)
    p = sub.add_parser("check", help="validity-condition report")
    common(p)
    return parser


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    else:
        cfg = default_config()
    if args.alpha_sign:
        mag = abs(cfg.crystal.aperiodicity)
        signed = mag if args.alpha_sign == "+" else -mag
        cfg = replace(cfg, crystal=replace(cfg.crystal, aperiodicity=signed))
    if args.fibre_model:
        cfg = replace(cfg, fibre=replace(cfg.fibre, model=args.fibre_model))
    return cfg


def _fmt(x) -> str:
    return format(float(x), ".9g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".biphoton-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path, columns, rows, cfg_hash, meta: str = "") -> None:
    lines = [f"# biphoton v{__version__} config_sha256={cfg_hash}" + (f" {meta}" if meta else "")]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")
    print(f"wrote {path}")


def _write_json(path, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def _spectral_amplitude(cfg: RunConfig, mode: str, spec=None) -> SpectralAmplitude:
    spec = cfg.crystal if spec is None else spec
    lib = cfg.library()
    summary = dispersion_summary(spec, lib)
    grid_mode = mode if mode in ("exact", "quadratic", "linear") else "linear"
    grid = default_detuning_grid(
        spec,
        summary,
        grid_mode,
        count=cfg.grid.count,
        span_factor=cfg.grid.span_factor,
        window_nm=cfg.grid.window_nm,
    )
    if mode in ("erf", "rect"):
        return tpsa_closed_form_curve(spec, summary, grid, kind=mode)
    return tpsa_numeric(spec, summary, grid, mode=mode, library=lib)


def _branch_rows(amp: SpectralAmplitude):
    """(wavelength_nm, intensity) rows: signal branch then idler branch."""
    w = amp.grid.samples()
    intensity = np.abs(amp.values) ** 2
    rows = []
    for branch_omega in (amp.omega0 + w, amp.omega0 - w):
        lam_nm = 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / branch_omega * 1e7
        order = np.argsort(lam_nm)
        rows.extend(zip(lam_nm[order], intensity[order]))
    return rows


def cmd_spectrum(cfg: RunConfig, args) -> int:
    mode = args.tpsa_mode or "exact"
    amp = _spectral_amplitude(cfg, mode)
    ref_mode = mode if mode in ("exact", "quadratic", "linear") else "linear"
    reference = _spectral_amplitude(cfg, ref_mode, spec=replace(cfg.crystal, aperiodicity=0.0))
    cfg_hash = cfg.config_hash()
    _write_csv(
        os.path.join(args.out, "spectrum.csv"),
        ("wavelength_nm", "intensity_norm"),
        _branch_rows(amp),
        cfg_hash,
        meta=f"mode={mode}",
    )
    _write_csv(
        os.path.join(args.out, "spectrum_alpha0.csv"),
        ("wavelength_nm", "intensity_norm"),
        _branch_rows(reference),
        cfg_hash,
        meta=f"mode={ref_mode} alpha=0",
    )
    return EXIT_OK


def _g2_rows(timed: TemporalAmplitude):
    """Rows (tau_fs, g2_norm) around the wavepacket, delay measured from the
    circular centroid; capped row count keeps files plottable."""
    intensity = timed.correlation()
    peak = intensity.max()
    n = timed.grid.count
    step = timed.grid.step
    centre = int(round((timed.centroid_tau_s - timed.grid.start) / step)) % n
    half_window = min(n // 2, max(int(math.ceil(10.0 * timed.fwhm_s / step)), 512))
    offsets = np.arange(-half_window, half_window)
    stride = max(1, int(math.ceil(offsets.size / _MAX_CSV_ROWS)))
    offsets = offsets[::stride]
    idx = (centre + offsets) % n
    tau_fs = offsets * step * 1e15
    return list(zip(tau_fs, intensity[idx] / peak))


def cmd_g2(cfg: RunConfig, args) -> int:
    mode = args.tpsa_mode or "erf"
    lengths = args.length_cm if args.length_cm else [0.0]
    amp = _spectral_amplitude(cfg, mode)
    lib = cfg.library()
    cfg_hash = cfg.config_hash()
    for length in lengths:
        timed = to_time(
            apply_fibre(amp, cfg.fibre, length, lib), pad_factor=cfg.grid.pad_factor
        )
        meta = (
            f"mode={mode} length_cm={_fmt(length)} fwhm_fs={_fmt(timed.fwhm_s * 1e15)} "
            f"sidelobe={_fmt(timed.sidelobe_ratio)} "
            f"centroid_offset_fs={_fmt(timed.centroid_tau_s * 1e15)}"
        )
        _write_csv(
            os.path.join(args.out, f"g2_l{length:g}cm.csv"),
            ("tau_fs", "g2_norm"),
            _g2_rows(timed),
            cfg_hash,
            meta=meta,
        )
    return EXIT_OK


def _parse_lengths(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--lengths-cm expects start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--lengths-cm expects numbers, got {text!r}") from None
    if count < 2 or stop <= start or start < 0:
        raise ConfigError(f"--lengths-cm needs 0 <= start < stop and count >= 2, got {text!r}")
    return np.linspace(start, stop, count)


def cmd_sweep(cfg: RunConfig, args) -> int:
    mode = args.tpsa_mode or "erf"
    lengths = _parse_lengths(args.lengths_cm)
    lib = cfg.library()
    mag = abs(cfg.crystal.aperiodicity)
    if mag == 0:
        raise ConfigError("sweep needs a nonzero alpha_per_cm2 (both signs are emitted)")
    results = {}
    for label, signed in (("plus", +mag), ("minus", -mag)):
        spec = replace(cfg.crystal, aperiodicity=signed)
        amp = _spectral_amplitude(cfg, mode, spec=spec)
        results[label] = sweep_fibre(
            amp, cfg.fibre, lengths, lib, pad_factor=cfg.grid.pad_factor
        )
    rows = [
        (
            length,
            results["plus"][i].fwhm_s * 1e15,
            results["plus"][i].sidelobe_ratio,
            results["minus"][i].fwhm_s * 1e15,
            results["minus"][i].sidelobe_ratio,
        )
        for i, length in enumerate(lengths)
    ]
    _write_csv(
        os.path.join(args.out, "sweep.csv"),
        (
            "l_cm",
            "fwhm_fs_alpha_plus",
            "sidelobe_alpha_plus",
            "fwhm_fs_alpha_minus",
            "sidelobe_alpha_minus",
        ),
        rows,
        cfg.config_hash(),
        meta=f"mode={mode} fibre={cfg.fibre.model}",
    )
    widths = [p.fwhm_s for p in results["minus"]]
    i_min = int(np.argmin(widths))
    lo = lengths[max(0, i_min - 1)]
    hi = lengths[min(len(lengths) - 1, i_min + 1)]
    spec_neg = replace(cfg.crystal, aperiodicity=-mag)
    amp_neg = _spectral_amplitude(cfg, mode, spec=spec_neg)
    best = refine_minimum(
        amp_neg, cfg.fibre, lo, hi, lib, pad_factor=cfg.grid.pad_factor
    )
    print(
        json.dumps(
            {
                "min_fwhm_fs": round(best.fwhm_s * 1e15, 4),
                "at_length_cm": round(best.length_cm, 4),
                "sidelobe_ratio": round(best.sidelobe_ratio, 5),
            }
        )
    )
    return EXIT_OK


def cmd_design(cfg: RunConfig, args) -> int:
    lib = cfg.library()
    summary = dispersion_summary(cfg.crystal, lib)
    k1f, kqf = fibre_constants(cfg.fibre, summary.omega0, lib)
    report = condition_report(cfg.crystal, summary)
    payload = {
        "config_sha256": cfg.config_hash(),
        "omega0_rad_s": summary.omega0,
        "gvm_s_per_cm": summary.gvm,
        "gvd_mean_s2_per_cm": summary.gvd_mean,
        "mismatch0_rad_per_cm": summary.mismatch0,
        "grating_k0_rad_per_cm": cfg.crystal.grating_k0,
        "fibre_inv_group_velocity_s_per_cm": k1f,
        "fibre_half_gvd_s2_per_cm": kqf,
        "poling_period_um": {
            "input_face": local_poling_period(cfg.crystal, -0.5 * cfg.crystal.length_cm),
            "centre": local_poling_period(cfg.crystal, 0.0),
            "output_face": local_poling_period(cfg.crystal, +0.5 * cfg.crystal.length_cm),
        },
        "conditions": {
            "broadening_ratio": report.broadening_ratio,
            "gvd_ratio": report.gvd_ratio,
            "edge_gvd_ratio": report.edge_gvd_ratio,
            "broadening_ok": report.broadening_ok,
            "gvd_ok": report.gvd_ok,
            "edge_ok": report.edge_ok,
        },
    }
    try:
        payload["l_opt_cm"] = optimal_length(summary, cfg.crystal, cfg.fibre, lib)
        payload["compressing_alpha_per_cm2"] = cfg.crystal.aperiodicity
    except NoCompressionSolutionError as exc:
        flipped = cfg.crystal.flipped()
        payload["l_opt_cm"] = optimal_length(summary, flipped, cfg.fibre, lib)
        payload["compressing_alpha_per_cm2"] = flipped.aperiodicity
        payload["note"] = str(exc)
    _write_json(os.path.join(args.out, "design.json"), payload)
    print(json.dumps({"l_opt_cm": round(payload["l_opt_cm"], 4)}))
    return EXIT_OK


def cmd_check(cfg: RunConfig, args) -> int:
    lib = cfg.library()
    summary = dispersion_summary(cfg.crystal, lib)
    report = condition_report(cfg.crystal, summary)
    payload = {
        "config_sha256": cfg.config_hash(),
        "broadening_ratio": report.broadening_ratio,
        "gvd_ratio": report.gvd_ratio,
        "edge_gvd_ratio": report.edge_gvd_ratio,
        "broadening_ok": report.broadening_ok,
        "gvd_ok": report.gvd_ok,
        "edge_ok": report.edge_ok,
        "thresholds": {
            "broadening_min": report.broadening_threshold,
            "gvd_max": report.gvd_threshold,
        },
    }
    _write_json(os.path.join(args.out, "check.json"), payload)
    print(json.dumps({"gvd_ratio": round(report.gvd_ratio, 4)}))
    return EXIT_OK


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "g2": cmd_g2,
    "sweep": cmd_sweep,
    "design": cmd_design,
    "check": cmd_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        os.makedirs(args.out, exist_ok=True)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        _emit_error("config-error", exc)
        return EXIT_CONFIG
    except BiphotonError as exc:
        _emit_error("numerical-error", exc)
        return EXIT_NUMERICAL


def _emit_error(kind: str, exc: Exception) -> None:
    print(
        json.dumps({"error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)}}),
        file=sys.stderr,
    )


if __name__ == "__main__":
    sys.exit(main())
