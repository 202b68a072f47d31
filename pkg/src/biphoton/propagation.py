"""Fibre spectral phase on one arm of the biphoton, conversion to the time
domain, the chirp-cancelling fibre length, and width-versus-length sweeps.

A fibre of length l on one arm multiplies the spectral amplitude by a pure
phase.  In the quadratic model that phase is ``(s*k1*W + kq*W^2) * l`` where
``k1`` is the inverse group velocity, ``kq`` half the GVD coefficient of the
fibre material and ``s`` the arm sign (the idler sits at omega0 - W, so its
linear term enters with s = -1; the linear part is a pure delay either way).
The full model evaluates the material's k(omega) on the arm and by default
subtracts the constant and linear Taylor parts, which only recentres the
wavepacket inside the periodic transform window.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend, numerics
from .amplitudes import SpectralAmplitude, TemporalAmplitude
from .crystal import CrystalSpec
from .dispersion import (
    DispersionSummary,
    MaterialLibrary,
    default_library,
    wavevector,
)
from .errors import NoCompressionSolutionError

DEFAULT_PAD_FACTOR = 8

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FibreSpec:
    """Dispersive fibre on one arm: material, phase model, and which photon."""

    material: str = "fused_silica"
    model: str = "quadratic"  # or "full"
    arm: str = "idler"  # or "signal"

    def __post_init__(self):
        if self.model not in ("quadratic", "full"):
            raise ValueError(f"fibre model must be quadratic|full, got {self.model!r}")
        if self.arm not in ("idler", "signal"):
            raise ValueError(f"fibre arm must be idler|signal, got {self.arm!r}")


def fibre_constants(
    fibre: FibreSpec, omega0: float, library: MaterialLibrary | None = None
) -> tuple:
    """(inverse group velocity s/cm, half-GVD s^2/cm) of the fibre at omega0."""
    lib = library if library is not None else default_library()
    material = lib[fibre.material]
    k1 = wavevector(material, omega0, 1)
    kq = 0.5 * wavevector(material, omega0, 2)
    return k1, kq


def fibre_phase(
    fibre: FibreSpec,
    length_cm: float,
    detuning,
    omega0: float,
    library: MaterialLibrary | None = None,
    *,
    centre_full_model: bool = True,
):
    """Spectral phase (rad) the fibre adds at each detuning (rad/s)."""
    if length_cm < 0:
        raise ValueError(f"fibre length must be nonnegative, got {length_cm}")
    w = np.asarray(detuning, dtype=float)
    sign = -1.0 if fibre.arm == "idler" else +1.0
    if fibre.model == "quadratic":
        k1, kq = fibre_constants(fibre, omega0, library)
        phase = (sign * k1 * w + kq * w * w) * length_cm
    else:
        lib = library if library is not None else default_library()
        material = lib[fibre.material]
        omega_arm = omega0 + sign * w
        phase = wavevector(material, omega_arm, 0) * length_cm
        if centre_full_model:
            k0 = wavevector(material, omega0, 0)
            k1 = wavevector(material, omega0, 1)
            phase = phase - (k0 + sign * k1 * w) * length_cm
    if np.ndim(detuning) == 0:
        return float(phase)
    return phase


def apply_fibre(
    amplitude: SpectralAmplitude,
    fibre: FibreSpec,
    length_cm: float,
    library: MaterialLibrary | None = None,
    *,
    centre_full_model: bool = True,
) -> SpectralAmplitude:
    """Multiply by the fibre phase; the spectrum's magnitude is untouched."""
    phase = fibre_phase(
        fibre,
        length_cm,
        amplitude.grid.samples(),
        amplitude.omega0,
        library,
        centre_full_model=centre_full_model,
    )
    notes = amplitude.warnings
    if fibre.model == "full" and centre_full_model and length_cm > 0:
        notes = notes + (
            "full fibre model: constant and linear phase removed (pure delay)",
        )
    return SpectralAmplitude(
        grid=amplitude.grid,
        values=amplitude.values * np.exp(1j * phase),
        omega0=amplitude.omega0,
        warnings=notes,
    )


def _padded_curve(amplitude: SpectralAmplitude, pad_factor: int) -> numerics.ComplexCurve:
    grid = amplitude.grid
    if pad_factor == 1:
        return numerics.ComplexCurve(grid, amplitude.values, amplitude.warnings)
    n = grid.count
    total = n * pad_factor
    left = (total - n) // 2
    values = np.zeros(total, dtype=np.complex128)
    values[left : left + n] = amplitude.values
    padded = numerics.UniformGrid(
        start=grid.start - left * grid.step, step=grid.step, count=total
    )
    return numerics.ComplexCurve(padded, values, amplitude.warnings)


def to_time(
    amplitude: SpectralAmplitude,
    *,
    pad_factor: int = DEFAULT_PAD_FACTOR,
    sign: int = +1,
) -> TemporalAmplitude:
    """Fourier transform to the delay domain plus width analysis of |F(tau)|^2.

    ``pad_factor`` (a power of two) zero-pads the spectrum before the
    transform; that is plain trigonometric interpolation in delay and is
    needed to resolve few-fs compressed features on coarse detuning grids.
    """
    if pad_factor < 1 or pad_factor & (pad_factor - 1):
        raise ValueError(f"pad_factor must be a power of two, got {pad_factor}")
    warn = ()
    if numerics.has_edge_leakage(amplitude.values):
        warn = (
            "edge-leakage: spectrum not decayed at grid ends before padding",
        )
    curve = _padded_curve(
        SpectralAmplitude(
            amplitude.grid, amplitude.values, amplitude.omega0, amplitude.warnings + warn
        ),
        pad_factor,
    )
    transformed = numerics.fourier_transform(curve, sign)
    intensity = np.abs(transformed.values) ** 2
    report = numerics.fwhm(intensity, transformed.grid, cyclic=True)

    # circular centroid: robust when a large group delay wraps the window
    n = transformed.grid.count
    angles = 2.0 * math.pi * np.arange(n) / n
    mean = np.sum(intensity * np.exp(1j * angles))
    frac = (np.angle(mean) / (2.0 * math.pi)) % 1.0
    centroid = transformed.grid.start + frac * transformed.grid.span

    return TemporalAmplitude(
        grid=transformed.grid,
        values=transformed.values,
        fwhm_s=report.width,
        sidelobe_ratio=report.sidelobe_ratio,
        peak_tau_s=report.peak_position,
        centroid_tau_s=float(centroid),
        multimodal=report.multimodal,
        warnings=transformed.warnings,
    )


def optimal_length(
    summary: DispersionSummary,
    spec: CrystalSpec,
    fibre: FibreSpec,
    library: MaterialLibrary | None = None,
) -> float:
    """Fibre length (cm) that cancels the quadratic spectral chirp.

    The chirped-grating amplitude carries quadratic phase gvm^2/(4a) per W^2;
    a fibre adds kq*l.  Cancellation needs ``kq*l + gvm^2/(4a) = 0``, so for
    a normal-dispersion fibre only a < 0 (poling period decreasing along the
    pump) admits a positive length.
    """
    _, kq = fibre_constants(fibre, summary.omega0, library)
    if kq <= 0:
        raise NoCompressionSolutionError(
            f"fibre half-GVD must be positive, got {kq:.3e} s^2/cm"
        )
    a = spec.aperiodicity
    if a == 0:
        raise NoCompressionSolutionError("periodic crystal has no chirp to cancel")
    length = -summary.gvm**2 / (4.0 * a * kq)
    if length <= 0:
        raise NoCompressionSolutionError(
            "positive-GVD fibre only broadens the wavepacket for aperiodicity "
            f"{a:+g} rad/cm^2; flip the crystal (negative chirp) to compress"
        )
    return length


@dataclass(frozen=True)
class SweepPoint:
    length_cm: float
    fwhm_s: float
    sidelobe_ratio: float


def sweep_fibre(
    amplitude: SpectralAmplitude,
    fibre: FibreSpec,
    lengths_cm,
    library: MaterialLibrary | None = None,
    *,
    pad_factor: int = DEFAULT_PAD_FACTOR,
) -> list:
    """Correlation width and side-lobe ratio after each fibre length.

    Entries are independent; they are evaluated in a thread pool capped by
    BIPHOTON_THREADS and returned in input order regardless of completion.
    """
    lib = library if library is not None else default_library()

    def one(length: float) -> SweepPoint:
        timed = to_time(
            apply_fibre(amplitude, fibre, length, lib), pad_factor=pad_factor
        )
        return SweepPoint(
            length_cm=float(length),
            fwhm_s=timed.fwhm_s,
            sidelobe_ratio=timed.sidelobe_ratio,
        )

    lengths = [float(x) for x in lengths_cm]
    workers = min(backend.thread_count(), max(1, len(lengths)))
    if workers > 1 and len(lengths) > 4:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, lengths))
    return [one(length) for length in lengths]


def refine_minimum(
    amplitude: SpectralAmplitude,
    fibre: FibreSpec,
    lo_cm: float,
    hi_cm: float,
    library: MaterialLibrary | None = None,
    *,
    tol_cm: float = 0.01,
    pad_factor: int = DEFAULT_PAD_FACTOR,
) -> SweepPoint:
    """Golden-section refinement of the width minimum inside [lo, hi]."""
    lib = library if library is not None else default_library()

    def width(length: float) -> SweepPoint:
        timed = to_time(
            apply_fibre(amplitude, fibre, length, lib), pad_factor=pad_factor
        )
        return SweepPoint(float(length), timed.fwhm_s, timed.sidelobe_ratio)

    a, b = float(lo_cm), float(hi_cm)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = width(c), width(d)
    while b - a > tol_cm:
        if fc.fwhm_s < fd.fwhm_s:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = width(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = width(d)
    return fc if fc.fwhm_s <= fd.fwhm_s else fd
