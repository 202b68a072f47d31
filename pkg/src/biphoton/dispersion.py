"""Refractive-index models and frequency derivatives of the dispersion law.

Materials are described by published Sellmeier fits (wavelengths in um).
Wavevectors are reported in rad/cm, inverse group velocities in s/cm and
group-velocity-dispersion coefficients in s^2/cm, matching the crystal-length
units used throughout the package.

Derivatives are taken by adaptive central differences in wavelength and
converted with the exact chain rule

    k  = 2*pi*n/lambda
    k' = (n - lambda*dn/dlambda) / c
    k'' = lambda^3 * d2n/dlambda2 / (2*pi*c^2)

Differencing in wavelength (where n and its curvature are order-one numbers)
rather than in angular frequency keeps the second derivative well inside
float64 resolution; a Richardson step check enforces 1e-8 relative accuracy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.constants import c as _C_M_PER_S

from .errors import ConfigError, ConvergenceError, WavelengthRangeError

SPEED_OF_LIGHT_CM_S = 100.0 * _C_M_PER_S  # 2.99792458e10 cm/s

_DERIV_REL_TOL = 1e-8


def _n2_sellmeier_3term(coeff, lam2):
    # n^2 = 1 + sum B_i lam^2/(lam^2 - C_i^2), coefficients [B1,C1,B2,C2,...]
    n2 = 1.0
    for i in range(0, len(coeff), 2):
        b, c = coeff[i], coeff[i + 1]
        n2 = n2 + b * lam2 / (lam2 - c * c)
    return n2


def _n2_sellmeier_poles(coeff, lam2):
    # n^2 = A + sum B_i/(lam^2 - C_i), coefficients [A,B1,C1,B2,C2,...]
    n2 = coeff[0]
    for i in range(1, len(coeff), 2):
        b, c = coeff[i], coeff[i + 1]
        n2 = n2 + b / (lam2 - c)
    return n2


def _n2_constant(coeff, lam2):
    # dispersionless stand-in for tests; coefficients [n]
    return coeff[0] ** 2 * np.ones_like(lam2)


_FORMS = {
    "sellmeier-3term": (_n2_sellmeier_3term, lambda c: len(c) >= 2 and len(c) % 2 == 0),
    "sellmeier-poles": (_n2_sellmeier_poles, lambda c: len(c) >= 3 and len(c) % 2 == 1),
    "constant": (_n2_constant, lambda c: len(c) == 1),
}


@dataclass(frozen=True)
class MaterialModel:
    """One refractive-index curve: a named axis of a material."""

    name: str
    axis: str
    form: str
    coefficients: tuple
    valid_um: tuple
    citation: str = ""

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ConfigError(f"{self.name}: unknown dispersion form {self.form!r}")
        func, check = _FORMS[self.form]
        coeff = tuple(float(x) for x in self.coefficients)
        if not check(coeff):
            raise ConfigError(f"{self.name}: malformed coefficient list for {self.form}")
        object.__setattr__(self, "coefficients", coeff)
        lo, hi = (float(v) for v in self.valid_um)
        if not 0.0 < lo < hi:
            raise ConfigError(f"{self.name}: invalid validity range {self.valid_um}")
        object.__setattr__(self, "valid_um", (lo, hi))
        if self.axis not in ("x", "y", "z", "isotropic"):
            raise ConfigError(f"{self.name}: axis must be x/y/z/isotropic")


def refractive_index(model: MaterialModel, lam_um):
    """n(lambda) from the model's published fit; lam_um scalar or array."""
    lam = np.asarray(lam_um, dtype=float)
    lo, hi = model.valid_um
    if lam.size and (lam.min() < lo or lam.max() > hi):
        raise WavelengthRangeError(
            f"{model.name}: wavelength {lam.min():.4g}-{lam.max():.4g} um outside "
            f"validity range [{lo}, {hi}] um"
        )
    n2 = _FORMS[model.form][0](model.coefficients, lam * lam)
    n = np.sqrt(n2)
    if np.ndim(lam_um) == 0:
        return float(n)
    return n


def _index_unchecked(model: MaterialModel, lam):
    return np.sqrt(_FORMS[model.form][0](model.coefficients, lam * lam))


def _lambda_derivative(model: MaterialModel, lam_um: float, order: int) -> float:
    """Adaptive central difference of n(lambda) with a Richardson step check.

    The step halves until two successive Richardson-extrapolated estimates
    agree to 1e-8 relative (plus the float64 rounding floor of the stencil,
    which the raw differences cannot beat); the stencil must stay inside the
    validity range.
    """
    lo, hi = model.valid_um
    room = min(lam_um - lo, hi - lam_um)
    if room <= 0.0:
        raise WavelengthRangeError(
            f"{model.name}: derivative stencil at {lam_um:.4g} um leaves validity "
            f"range [{lo}, {hi}] um"
        )
    h = min(0.01 * lam_um, 0.45 * room)
    eps = float(np.finfo(float).eps)
    n0 = float(_index_unchecked(model, np.float64(lam_um)))
    raw_prev = None
    extrap_prev = None
    best = None
    best_delta = math.inf
    worse = 0
    for _ in range(60):
        np_ = float(_index_unchecked(model, np.float64(lam_um + h)))
        nm = float(_index_unchecked(model, np.float64(lam_um - h)))
        if order == 1:
            raw = (np_ - nm) / (2.0 * h)
            noise = eps * abs(n0) / h
        else:
            raw = (np_ - 2.0 * n0 + nm) / (h * h)
            noise = 4.0 * eps * abs(n0) / (h * h)
        if raw_prev is not None:
            extrap = raw + (raw - raw_prev) / 3.0
            if extrap_prev is not None:
                delta = abs(extrap - extrap_prev)
                tol = _DERIV_REL_TOL * max(abs(extrap), 1e-300) + noise
                if delta <= tol:
                    return extrap
                if delta < best_delta:
                    best_delta, best = delta, extrap
                    worse = 0
                else:
                    worse += 1
                    if worse >= 4:
                        break  # noise floor: deltas no longer shrink
            extrap_prev = extrap
        raw_prev = raw
        h *= 0.5
    raise ConvergenceError(
        f"{model.name}: order-{order} derivative at {lam_um:.4g} um did not "
        f"stabilize to {_DERIV_REL_TOL:g} relative",
        last_estimate=best,
        previous_estimate=extrap_prev,
    )


def wavevector(model: MaterialModel, omega, order: int = 0):
    """k and its frequency derivatives at angular frequency omega (rad/s).

    order 0 -> k (rad/cm); order 1 -> dk/domega (s/cm); order 2 ->
    d2k/domega2 (s^2/cm).  Order 0 accepts arrays; derivatives are scalar.
    """
    if order == 0:
        w = np.asarray(omega, dtype=float)
        lam_um = 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / w * 1e4
        k = refractive_index(model, lam_um) * w / SPEED_OF_LIGHT_CM_S
        if np.ndim(omega) == 0:
            return float(k)
        return k
    w = float(omega)
    lam_um = 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / w * 1e4
    n = refractive_index(model, lam_um)
    if order == 1:
        dn = _lambda_derivative(model, lam_um, 1)
        return (n - lam_um * dn) / SPEED_OF_LIGHT_CM_S
    if order == 2:
        d2n_um = _lambda_derivative(model, lam_um, 2)
        lam_cm = lam_um * 1e-4
        d2n_cm = d2n_um / 1e-8
        return lam_cm**3 * d2n_cm / (2.0 * math.pi * SPEED_OF_LIGHT_CM_S**2)
    raise ValueError(f"order must be 0, 1 or 2, got {order}")


class MaterialLibrary:
    """Named collection of MaterialModel entries, loadable from JSON."""

    def __init__(self, models: dict):
        self._models = dict(models)

    def __getitem__(self, name: str) -> MaterialModel:
        try:
            return self._models[name]
        except KeyError:
            raise KeyError(
                f"unknown material {name!r}; available: {sorted(self._models)}"
            ) from None

    def __contains__(self, name: str) -> bool:
        return name in self._models

    def names(self):
        return sorted(self._models)

    @classmethod
    def from_dict(cls, data: dict) -> "MaterialLibrary":
        models = {}
        for name, entry in data.items():
            unknown = set(entry) - {"axis", "form", "coefficients", "valid_um", "citation"}
            if unknown:
                raise ConfigError(f"material {name}: unknown keys {sorted(unknown)}")
            models[name] = MaterialModel(
                name=name,
                axis=entry["axis"],
                form=entry["form"],
                coefficients=tuple(entry["coefficients"]),
                valid_um=tuple(entry["valid_um"]),
                citation=entry.get("citation", ""),
            )
        return cls(models)

    @classmethod
    def from_file(cls, path) -> "MaterialLibrary":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@lru_cache(maxsize=1)
def default_library() -> MaterialLibrary:
    """Shipped material set: KTP principal axes plus fused silica."""
    text = resources.files("biphoton").joinpath("materials.json").read_text("utf-8")
    return MaterialLibrary.from_dict(json.loads(text))


@dataclass(frozen=True)
class DispersionSummary:
    """Dispersion constants at the degenerate frequency of a down-conversion pair.

    ``gvm`` is the signal-idler inverse-group-velocity difference (s/cm),
    ``gvd_mean`` the mean of the two second derivatives (s^2/cm) and
    ``mismatch0`` the collinear wavevector mismatch k_s + k_i - k_p at
    degeneracy (rad/cm), to be compared against the grating vector.
    """

    omega0: float
    k_pump: float
    k_signal: float
    k_idler: float
    k1_signal: float
    k1_idler: float
    k2_signal: float
    k2_idler: float
    gvm: float
    gvd_mean: float
    mismatch0: float


def dispersion_summary(crystal, library: MaterialLibrary | None = None) -> DispersionSummary:
    """Evaluate all dispersion constants for a crystal's material assignment.

    The degenerate frequency is half the pump frequency (frequency-degenerate
    phasematching); each wave is evaluated on the material axis the crystal
    assigns to it.
    """
    lib = library if library is not None else default_library()
    pump = lib[crystal.pump_material]
    signal = lib[crystal.signal_material]
    idler = lib[crystal.idler_material]

    omega_p = 2.0 * math.pi * SPEED_OF_LIGHT_CM_S / (crystal.pump_nm * 1e-7)
    omega0 = 0.5 * omega_p

    k_pump = wavevector(pump, omega_p, 0)
    k_signal = wavevector(signal, omega0, 0)
    k_idler = wavevector(idler, omega0, 0)
    k1_signal = wavevector(signal, omega0, 1)
    k1_idler = wavevector(idler, omega0, 1)
    k2_signal = wavevector(signal, omega0, 2)
    k2_idler = wavevector(idler, omega0, 2)

    return DispersionSummary(
        omega0=omega0,
        k_pump=k_pump,
        k_signal=k_signal,
        k_idler=k_idler,
        k1_signal=k1_signal,
        k1_idler=k1_idler,
        k2_signal=k2_signal,
        k2_idler=k2_idler,
        gvm=k1_signal - k1_idler,
        gvd_mean=0.5 * (k2_idler + k2_signal),
        mismatch0=k_signal + k_idler - k_pump,
    )
