"""Run configuration: strict JSON with explicit units on every dimensional key.

Unknown keys are rejected with their full path; every omitted key falls back
to the shipped defaults (the chirped-KTP configuration the CLI reproduces).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .crystal import CrystalSpec
from .dispersion import MaterialLibrary, default_library
from .errors import ConfigError, CrystalSpecError
from .propagation import FibreSpec

_CRYSTAL_KEYS = {
    "length_cm",
    "k0_per_cm",
    "alpha_per_cm2",
    "pump_nm",
    "pump_material",
    "signal_material",
    "idler_material",
}
_FIBRE_KEYS = {"material", "model", "arm"}
_GRID_KEYS = {"count", "span_factor", "window_nm", "pad_factor"}
_TOP_KEYS = {"crystal", "fibre", "grid", "materials_file"}


@dataclass(frozen=True)
class GridConfig:
    count: int = 65536
    span_factor: float = 3.0
    window_nm: tuple = (700.0, 1400.0)
    pad_factor: int = 8


@dataclass(frozen=True)
class RunConfig:
    crystal: CrystalSpec
    fibre: FibreSpec
    grid: GridConfig
    materials_file: str | None = None

    def library(self) -> MaterialLibrary:
        if self.materials_file:
            return MaterialLibrary.from_file(self.materials_file)
        return default_library()

    def resolved(self) -> dict:
        """Fully resolved configuration, suitable for hashing and echoing."""
        c, f, g = self.crystal, self.fibre, self.grid
        return {
            "crystal": {
                "length_cm": c.length_cm,
                "k0_per_cm": c.grating_k0,
                "alpha_per_cm2": c.aperiodicity,
                "pump_nm": c.pump_nm,
                "pump_material": c.pump_material,
                "signal_material": c.signal_material,
                "idler_material": c.idler_material,
            },
            "fibre": {"material": f.material, "model": f.model, "arm": f.arm},
            "grid": {
                "count": g.count,
                "span_factor": g.span_factor,
                "window_nm": list(g.window_nm),
                "pad_factor": g.pad_factor,
            },
            "materials_file": self.materials_file,
        }

    def config_hash(self) -> str:
        canon = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def default_config() -> RunConfig:
    return RunConfig(crystal=CrystalSpec(), fibre=FibreSpec(), grid=GridConfig())


def _reject_unknown(section: dict, allowed: set, path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{path}{key}: unknown key")


def _number(section: dict, key: str, default, path: str, *, positive=False, nonzero_ok=True):
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}{key}: expected a number, got {value!r}")
    value = float(value)
    if positive and not value > 0:
        raise ConfigError(f"{path}{key}: must be > 0, got {value}")
    if not nonzero_ok and value == 0:
        raise ConfigError(f"{path}{key}: must be nonzero")
    return value


def _string(section: dict, key: str, default, path: str, *, choices=None):
    if key not in section:
        return default
    value = section[key]
    if not isinstance(value, str):
        raise ConfigError(f"{path}{key}: expected a string, got {value!r}")
    if choices and value not in choices:
        raise ConfigError(f"{path}{key}: expected one of {sorted(choices)}, got {value!r}")
    return value


def parse_config(text: str) -> RunConfig:
    """Validate JSON text into a RunConfig; empty input means all defaults."""
    text = text.strip()
    if not text:
        data = {}
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "")

    defaults = default_config()

    cs = data.get("crystal", {})
    if not isinstance(cs, dict):
        raise ConfigError("crystal: expected an object")
    _reject_unknown(cs, _CRYSTAL_KEYS, "crystal.")
    dc = defaults.crystal
    alpha = _number(cs, "alpha_per_cm2", dc.aperiodicity, "crystal.")
    try:
        crystal = CrystalSpec(
            length_cm=_number(cs, "length_cm", dc.length_cm, "crystal.", positive=True),
            grating_k0=_number(cs, "k0_per_cm", dc.grating_k0, "crystal.", positive=True),
            aperiodicity=alpha,
            pump_nm=_number(cs, "pump_nm", dc.pump_nm, "crystal.", positive=True),
            pump_material=_string(cs, "pump_material", dc.pump_material, "crystal."),
            signal_material=_string(cs, "signal_material", dc.signal_material, "crystal."),
            idler_material=_string(cs, "idler_material", dc.idler_material, "crystal."),
        )
    except CrystalSpecError as exc:
        raise ConfigError(f"crystal: {exc}") from None

    fs = data.get("fibre", {})
    if not isinstance(fs, dict):
        raise ConfigError("fibre: expected an object")
    _reject_unknown(fs, _FIBRE_KEYS, "fibre.")
    df = defaults.fibre
    fibre = FibreSpec(
        material=_string(fs, "material", df.material, "fibre."),
        model=_string(fs, "model", df.model, "fibre.", choices={"quadratic", "full"}),
        arm=_string(fs, "arm", df.arm, "fibre.", choices={"idler", "signal"}),
    )

    gs = data.get("grid", {})
    if not isinstance(gs, dict):
        raise ConfigError("grid: expected an object")
    _reject_unknown(gs, _GRID_KEYS, "grid.")
    dg = defaults.grid
    count = int(_number(gs, "count", dg.count, "grid.", positive=True))
    if count < 256 or count & (count - 1):
        raise ConfigError(f"grid.count: must be a power of two >= 256, got {count}")
    pad = int(_number(gs, "pad_factor", dg.pad_factor, "grid.", positive=True))
    if pad & (pad - 1):
        raise ConfigError(f"grid.pad_factor: must be a power of two, got {pad}")
    window = gs.get("window_nm", list(dg.window_nm))
    if (
        not isinstance(window, (list, tuple))
        or len(window) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in window)
    ):
        raise ConfigError(f"grid.window_nm: expected [lo_nm, hi_nm], got {window!r}")
    lo, hi = float(window[0]), float(window[1])
    if not 0 < lo < hi:
        raise ConfigError(f"grid.window_nm: need 0 < lo < hi, got [{lo}, {hi}]")
    grid = GridConfig(
        count=count,
        span_factor=_number(gs, "span_factor", dg.span_factor, "grid.", positive=True),
        window_nm=(lo, hi),
        pad_factor=pad,
    )

    materials_file = data.get("materials_file")
    if materials_file is not None and not isinstance(materials_file, str):
        raise ConfigError(f"materials_file: expected a path string, got {materials_file!r}")

    return RunConfig(crystal=crystal, fibre=fibre, grid=grid, materials_file=materials_file)
