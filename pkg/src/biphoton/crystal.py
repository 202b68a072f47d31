"""Linearly chirped quasi-phasematched crystal and its two-photon spectral
amplitude, in four flavours: quadrature with exact, quadratic or linearized
phase mismatch, plus erf and rectangle closed forms.

Geometry and conventions
------------------------
The nonlinearity phase along the crystal is written on the centred coordinate
``xi = z + L/2 in [-L/2, +L/2]`` as ``phi(xi) = K0*xi - a*xi**2`` where ``K0``
is the central grating vector and ``a`` the (signed) chirp rate of the local
grating vector ``K0 - 2*a*xi``.  All amplitudes are normalized to unit peak
magnitude over the evaluation grid; the spectral phase structure (the chirp)
is retained.

For the quadrature modes the amplitude at detuning W is

    F(W) = exp(-i*dk(W)*L/2) * integral exp(i*(dk(W) + K0)*xi - i*a*xi^2) dxi

with ``dk`` the phase mismatch in the requested approximation.  The linear
and quadratic modes use the idealized quasi-phasematched mismatch (grating
vector cancels the degenerate mismatch exactly), which is what makes the
linear mode agree with the erf closed form pointwise.  The exact mode keeps
the crystal's actual K0, so an imperfect match shows up as a small shift of
the emission band, and drops only a constant global phase.
"""

from __future__ import annotations

import math
import warnings as _warnings
from dataclasses import dataclass, replace

import numpy as np

from . import backend
from .amplitudes import SpectralAmplitude
from .dispersion import (
    SPEED_OF_LIGHT_CM_S,
    DispersionSummary,
    MaterialLibrary,
    default_library,
    wavevector,
)
from .errors import CrystalSpecError, DegenerateConfigError
from .numerics import UniformGrid, complex_erf

DEFAULT_GRID_COUNT = 2**16
#: exact-mode evaluation window (nm), spanning the usable transparency range
DEFAULT_WAVELENGTH_WINDOW_NM = (700.0, 1400.0)

TPSA_MODES = ("exact", "quadratic", "linear")
CLOSED_FORM_KINDS = ("erf", "rect")


def _normalize(values: np.ndarray, grid: UniformGrid) -> np.ndarray:
    """Unit peak magnitude, zero phase at the band centre.

    The overall complex constant of a spectral amplitude is not physical
    (all closed forms here are proportionality relations), so every curve
    pipeline pins it the same way: magnitude scaled to a peak of 1 and the
    phase zeroed at the sample nearest zero detuning.  That makes the
    quadrature and closed-form routes directly comparable pointwise.
    """
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        raise DegenerateConfigError("amplitude vanished on the whole grid")
    centre = int(np.argmin(np.abs(grid.samples())))
    ref = values[centre]
    if abs(ref) > 1e-6 * peak:
        return values * (np.conj(ref) / abs(ref)) / peak
    return values / peak


@dataclass(frozen=True)
class CrystalSpec:
    """Geometry and poling of the nonlinear crystal.

    ``aperiodicity`` is the signed chirp rate of the grating vector (rad/cm^2);
    flipping its sign corresponds to turning the crystal around.  The three
    material names map each wave onto an axis of the material library.
    """

    length_cm: float = 0.8
    grating_k0: float = 2441.8  # rad/cm
    aperiodicity: float = 1200.0  # rad/cm^2, signed
    pump_nm: float = 458.0
    pump_material: str = "ktp_y"
    signal_material: str = "ktp_z"
    idler_material: str = "ktp_y"
    chi0: float = 1.0

    def __post_init__(self):
        if not self.length_cm > 0:
            raise CrystalSpecError(f"crystal length must be positive, got {self.length_cm}")
        if not self.pump_nm > 0:
            raise CrystalSpecError(f"pump wavelength must be positive, got {self.pump_nm}")
        if not self.grating_k0 > 0:
            raise CrystalSpecError(f"grating vector must be positive, got {self.grating_k0}")
        if self.grating_k0 - abs(self.aperiodicity) * self.length_cm <= 0:
            raise CrystalSpecError(
                "local grating vector K0 - 2*a*xi changes sign inside the crystal; "
                "reduce |aperiodicity| or the length"
            )

    def flipped(self) -> "CrystalSpec":
        """The same crystal with input and output faces exchanged."""
        return replace(self, aperiodicity=-self.aperiodicity)


def local_poling_period(spec: CrystalSpec, xi_cm: float) -> float:
    """Poling period (um) at position xi (cm, measured from the centre).

    The local spatial frequency of the nonlinearity phase is ``K0 - 2*a*xi``;
    the period is 2*pi over it.
    """
    half = 0.5 * spec.length_cm
    if not -half <= xi_cm <= half:
        raise CrystalSpecError(
            f"position {xi_cm} cm outside the crystal [-{half}, {half}] cm"
        )
    k_local = spec.grating_k0 - 2.0 * spec.aperiodicity * xi_cm
    if k_local <= 0:
        raise CrystalSpecError("nonpositive local grating vector")
    return 2.0 * math.pi / k_local * 1e4


def phase_mismatch(
    spec: CrystalSpec,
    summary: DispersionSummary,
    detuning,
    mode: str = "quadratic",
    library: MaterialLibrary | None = None,
):
    """Wavevector mismatch k_i + k_s - k_p (rad/cm) at detuning (rad/s).

    ``exact`` evaluates the full index curves at omega0 -+ detuning;
    ``quadratic`` returns mismatch0 + gvm*W + gvd_mean*W^2 and ``linear``
    drops the quadratic term.
    """
    w = np.asarray(detuning, dtype=float)
    if mode == "exact":
        lib = library if library is not None else default_library()
        k_i = wavevector(lib[spec.idler_material], summary.omega0 - w, 0)
        k_s = wavevector(lib[spec.signal_material], summary.omega0 + w, 0)
        out = k_i + k_s - summary.k_pump
    elif mode == "quadratic":
        out = summary.mismatch0 + summary.gvm * w + summary.gvd_mean * w * w
    elif mode == "linear":
        out = summary.mismatch0 + summary.gvm * w
    else:
        raise ValueError(f"mode must be one of {TPSA_MODES}, got {mode!r}")
    if np.ndim(detuning) == 0:
        return float(out)
    return out


def default_detuning_grid(
    spec: CrystalSpec,
    summary: DispersionSummary,
    mode: str = "linear",
    count: int = DEFAULT_GRID_COUNT,
    span_factor: float = 3.0,
    window_nm: tuple = DEFAULT_WAVELENGTH_WINDOW_NM,
) -> UniformGrid:
    """Evaluation grid for a TPSA.

    Approximation modes use ``span_factor`` times the chirped-grating
    bandwidth ``2|a|L/|gvm|`` centred on zero (for a periodic crystal a span
    covering many sinc lobes is substituted).  The exact mode maps the
    wavelength window onto signal-branch detunings instead, so the full
    emission band is covered regardless of the chirp sign.
    """
    if mode == "exact":
        lo_nm, hi_nm = window_nm
        w_lo = 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / (hi_nm * 1e-7) - summary.omega0
        w_hi = 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / (lo_nm * 1e-7) - summary.omega0
        step = (w_hi - w_lo) / count
        return UniformGrid(start=w_lo, step=step, count=count)
    gvm = abs(summary.gvm)
    if gvm == 0:
        raise DegenerateConfigError("zero group-velocity mismatch: bandwidth undefined")
    if spec.aperiodicity != 0.0:
        bandwidth = 2.0 * abs(spec.aperiodicity) * spec.length_cm / gvm
    else:
        bandwidth = 200.0 * math.pi / (gvm * spec.length_cm)  # ~100 sinc zeros
    half = 0.5 * span_factor * bandwidth
    step = 2.0 * half / count
    return UniformGrid(start=-half, step=step, count=count)


def tpsa_numeric(
    spec: CrystalSpec,
    summary: DispersionSummary,
    grid: UniformGrid,
    mode: str = "linear",
    library: MaterialLibrary | None = None,
    *,
    max_phase_per_panel: float = math.pi / 4,
    rel_tol: float = 1e-8,
    num_threads: int | None = None,
) -> SpectralAmplitude:
    """Two-photon spectral amplitude by oscillatory quadrature over the crystal.

    The per-detuning integrals run through the active quadrature backend
    (compiled or numpy); each point carries a doubled-resolution self-check.
    The result is normalized to unit peak magnitude.
    """
    if mode not in TPSA_MODES:
        raise ValueError(f"mode must be one of {TPSA_MODES}, got {mode!r}")
    w = grid.samples()
    if mode == "exact":
        dk = phase_mismatch(spec, summary, w, "exact", library)
        u = dk + spec.grating_k0
        prefactor_phase = -(dk - summary.mismatch0) * 0.5 * spec.length_cm
    else:
        if mode == "quadratic":
            du = summary.gvm * w + summary.gvd_mean * w * w
        else:
            du = summary.gvm * w
        u = du
        prefactor_phase = -du * 0.5 * spec.length_cm

    integral = backend.chirp_integrals(
        u,
        spec.aperiodicity,
        0.5 * spec.length_cm,
        max_phase_per_panel=max_phase_per_panel,
        rel_tol=rel_tol,
        num_threads=num_threads,
    )
    values = spec.chi0 * np.exp(1j * prefactor_phase) * integral
    return SpectralAmplitude(
        grid=grid, values=_normalize(values, grid), omega0=summary.omega0
    )


def tpsa_closed_form(
    spec: CrystalSpec,
    summary: DispersionSummary,
    detuning,
    kind: str = "erf",
):
    """Closed-form two-photon spectral amplitude at detuning (rad/s), unnormalized.

    ``erf``: chirped-grating amplitude for a linearized mismatch,

        exp(-i*G*W*L/2 + i*G^2*W^2/(4a))
          * (erf(sqrt(i/a)*(L*a - G*W)/2) + erf(sqrt(i/a)*(L*a + G*W)/2))

    with G the group-velocity mismatch; sqrt(i/a) is taken on the principal
    branch (e^{+i pi/4}/sqrt(a) for a > 0, e^{-i pi/4}/sqrt|a| for a < 0).

    ``rect``: the same quadratic-phase prefactor times the indicator of the
    emission band |W| <= |a|*L/|G| - the large-chirp limit of the erf form.
    """
    if kind not in CLOSED_FORM_KINDS:
        raise ValueError(f"kind must be one of {CLOSED_FORM_KINDS}, got {kind!r}")
    a = spec.aperiodicity
    gvm = summary.gvm
    length = spec.length_cm
    if gvm == 0.0:
        raise DegenerateConfigError("closed forms require nonzero group-velocity mismatch")
    if a == 0.0:
        raise DegenerateConfigError(
            "closed forms require a chirped grating; use the linear quadrature "
            "mode for a periodic crystal"
        )
    w = np.asarray(detuning, dtype=float)
    pre = np.exp(-0.5j * gvm * w * length + 0.25j * gvm**2 * w * w / a)
    if kind == "erf":
        root = np.sqrt(1j / a)  # principal branch
        out = pre * (
            complex_erf(root * (length * a - gvm * w) / 2.0)
            + complex_erf(root * (length * a + gvm * w) / 2.0)
        )
    else:
        if broadening_ratio(spec) < 10.0:
            _warnings.warn(
                "rectangle closed form used with weak chirp (broadening ratio "
                f"{broadening_ratio(spec):.2f} < 10); erf form is more faithful",
                stacklevel=2,
            )
        half_width = abs(a) * length / abs(gvm)
        out = pre * (np.abs(w) <= half_width)
    if np.ndim(detuning) == 0:
        return complex(out)
    return out


def tpsa_closed_form_curve(
    spec: CrystalSpec,
    summary: DispersionSummary,
    grid: UniformGrid,
    kind: str = "erf",
) -> SpectralAmplitude:
    """Closed-form amplitude sampled on a grid and normalized to unit peak."""
    values = tpsa_closed_form(spec, summary, grid.samples(), kind)
    notes = ()
    if kind == "rect" and broadening_ratio(spec) < 10.0:
        notes = (f"weak chirp: broadening ratio {broadening_ratio(spec):.2f} < 10",)
    return SpectralAmplitude(
        grid=grid, values=_normalize(values, grid), omega0=summary.omega0, warnings=notes
    )


def broadening_ratio(spec: CrystalSpec) -> float:
    """|a| over pi^2/(4 L^2): how strongly the chirp broadens the spectrum."""
    return abs(spec.aperiodicity) * 4.0 * spec.length_cm**2 / math.pi**2


@dataclass(frozen=True)
class ConditionReport:
    """Validity diagnostics for the linearized-mismatch description.

    ``broadening_ratio``  - chirp strength |a| 4L^2/pi^2 (rectangle spectrum
    needs >> 1); ``gvd_ratio`` - |gvd_mean*L*a/gvm^2| (crystal GVD must be
    negligible, << 1); ``edge_gvd_ratio`` - |gvd_mean*W_edge/gvm| at the band
    edge W_edge = |a|L/|gvm| (spectrum narrow compared to the group-velocity
    walk-off, << 1).
    """

    broadening_ratio: float
    gvd_ratio: float
    edge_gvd_ratio: float
    broadening_ok: bool
    gvd_ok: bool
    edge_ok: bool
    broadening_threshold: float
    gvd_threshold: float


def condition_report(
    spec: CrystalSpec,
    summary: DispersionSummary,
    *,
    broadening_threshold: float = 10.0,
    gvd_threshold: float = 0.3,
) -> ConditionReport:
    """Evaluate the three validity ratios with configurable verdict thresholds."""
    br = broadening_ratio(spec)
    if summary.gvm == 0.0:
        gvd_ratio = math.inf
        edge_ratio = math.inf
    else:
        gvd_ratio = abs(
            summary.gvd_mean * spec.length_cm * spec.aperiodicity / summary.gvm**2
        )
        w_edge = abs(spec.aperiodicity) * spec.length_cm / abs(summary.gvm)
        edge_ratio = abs(summary.gvd_mean * w_edge / summary.gvm)
    return ConditionReport(
        broadening_ratio=br,
        gvd_ratio=gvd_ratio,
        edge_gvd_ratio=edge_ratio,
        broadening_ok=br > broadening_threshold,
        gvd_ok=gvd_ratio < gvd_threshold,
        edge_ok=edge_ratio < gvd_threshold,
        broadening_threshold=broadening_threshold,
        gvd_threshold=gvd_threshold,
    )
