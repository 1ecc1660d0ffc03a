"""Experiment configuration: dataclasses, defaults, strict JSON parsing.

Config files are plain JSON with units spelled out in key names (power_dbmw,
altitude_km, carrier_hz).  Parsing is strict: unknown keys anywhere are
rejected with the offending path, malformed JSON reports line and column,
and out-of-range values name the field.  Every key is optional; a file
holding only {"seed": 42} runs the shipped default scenario.

DEFAULT_CONFIG is the single source of truth for defaults.  Emitting it and
parsing the result reproduces default_spec() exactly because unit
conversions (dB to linear, degrees to radians) happen only on the parse
side, never in reverse.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

from .channel import GroundPosition, LinkBudgetParams, SatelliteGeometry
from .objective import MODES
from .solver import SolverParams
from .uncertainty import RAIN_POLICIES, EveRegion

SCHEMES = ("robust", "mrt", "nonrobust")
SWEEP_KINDS = ("none", "power_dbmw", "region_edge_km", "grid_density")


class ConfigError(Exception):
    """Invalid configuration file or value."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to pose one beamforming problem."""

    satellite: SatelliteGeometry
    link_budget: LinkBudgetParams
    lu_position: GroundPosition
    eve_regions: tuple[EveRegion, ...]
    power_dbmw: float = 30.0
    gamma_th: float = 5.0
    gamma_th_is_db: bool = False
    beta: float = 100.0
    m1: int = 10
    m2: int = 10
    solver: SolverParams = field(default_factory=SolverParams)
    rain_policy: str = "nominal"

    def __post_init__(self):
        if len(self.eve_regions) < 1:
            raise ConfigError("need at least one Eve region")
        if self.m1 < 1 or self.m2 < 1:
            raise ConfigError("grid_m1 and grid_m2 must be >= 1")
        if not self.beta > 0:
            raise ConfigError(f"beta must be > 0, got {self.beta}")
        if self.rain_policy not in RAIN_POLICIES:
            raise ConfigError(f"rain_policy must be one of {RAIN_POLICIES}")
        if self.gamma_th_linear < 0:
            raise ConfigError(f"gamma_th must be >= 0, got {self.gamma_th}")
        if not math.isfinite(self.power_dbmw):
            raise ConfigError("power_dbmw must be finite")

    @property
    def p_watts(self) -> float:
        """Per-antenna transmit power, dBmW converted to watts."""
        return 10.0 ** (self.power_dbmw / 10.0) / 1000.0

    @property
    def gamma_th_linear(self) -> float:
        if self.gamma_th_is_db:
            return 10.0 ** (self.gamma_th / 10.0)
        return self.gamma_th


@dataclass(frozen=True)
class SweepSpec:
    kind: str = "none"
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ConfigError(f"sweep kind must be one of {SWEEP_KINDS}")
        if self.kind == "none":
            if self.values:
                raise ConfigError("sweep kind 'none' takes no values")
        else:
            if len(self.values) < 1:
                raise ConfigError("sweep needs at least one value")
            if any(b <= a for a, b in zip(self.values, self.values[1:])):
                raise ConfigError("sweep values must be strictly increasing")
            if self.kind == "grid_density" and any(
                v < 1 or v != int(v) for v in self.values
            ):
                raise ConfigError("grid_density values must be positive integers")


@dataclass(frozen=True)
class ExperimentSpec:
    """A full run: scenario, optional sweep, schemes, output location."""

    scenario: ScenarioConfig
    sweep: SweepSpec = field(default_factory=SweepSpec)
    schemes: tuple[str, ...] = SCHEMES
    mode: str = "ue"
    output_dir: str = "out"
    seed: int = 42

    def __post_init__(self):
        if len(self.schemes) < 1:
            raise ConfigError("need at least one scheme")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ConfigError(f"unknown schemes {bad}, valid: {SCHEMES}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("duplicate scheme")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


def _hex_ring(radius: float) -> list[list[float]]:
    return [
        [radius * math.cos(math.radians(60 * k)), radius * math.sin(math.radians(60 * k))]
        for k in range(6)
    ]


# Shipped defaults: 7-feed GEO downlink (center feed plus a 1 m hexagonal
# ring, one spot beam each), user at the nadir beam center, three 100 km
# square Eve regions centered 250 to 395 km away inside neighbouring beams,
# spread in azimuth so no single steering direction evades all of them.
DEFAULT_CONFIG: dict = {
    "seed": 42,
    "mode": "ue",
    "schemes": ["robust", "mrt", "nonrobust"],
    "sweep": {"kind": "none", "values": []},
    "output_dir": "out",
    "scenario": {
        "satellite": {
            "altitude_km": 35786.0,
            "antenna_offsets_m": [[0.0, 0.0, 0.0]]
            + [[x, y, 0.0] for x, y in _hex_ring(1.0)],
            "beam_centers_km": [[0.0, 0.0]] + _hex_ring(250.0),
        },
        "link_budget": {
            "carrier_hz": 20e9,
            "max_beam_gain_db": 52.0,
            "half_power_beamwidth_deg": 0.4,
            "max_user_gain_db": 40.0,
            "rain_mu_db": -2.6,
            "rain_sigma_db": 1.63,
            "noise_bandwidth_hz": 250e6,
            "noise_temperature_k": 300.0,
        },
        "lu_position_km": [0.0, 0.0],
        "eve_regions_km": [
            [150.0, 250.0, 100.0, 200.0],
            [-300.0, -200.0, 150.0, 250.0],
            [50.0, 150.0, -430.0, -330.0],
        ],
        "power_dbmw": 30.0,
        "gamma_th": 5.0,
        "gamma_th_is_db": False,
        "beta": 100.0,
        "grid_m1": 10,
        "grid_m2": 10,
        "solver": {
            "rho": 300.0,
            "epsilon": 1e-4,
            "delta": 1e-5,
            "max_outer": 50,
            "max_inner": 5000,
            "lipschitz_mode": "safeguarded",
        },
        "rain_policy": "nominal",
    },
}


def _reject_unknown(obj: dict, allowed, path: str):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")


def _merge(user: dict, defaults: dict, path: str) -> dict:
    """Overlay a user dict on the defaults, rejecting unknown keys."""
    if not isinstance(user, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    _reject_unknown(user, defaults, path)
    out = {}
    for key, dval in defaults.items():
        if key in user:
            if isinstance(dval, dict):
                out[key] = _merge(user[key], dval, f"{path}.{key}")
            else:
                out[key] = user[key]
        else:
            out[key] = copy.deepcopy(dval)
    return out


def _num(obj: dict, key: str, path: str) -> float:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {type(val).__name__}")
    return float(val)


def _int(obj: dict, key: str, path: str) -> int:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {type(val).__name__}")
    return val


def _str(obj: dict, key: str, path: str) -> str:
    val = obj[key]
    if not isinstance(val, str):
        raise ConfigError(f"{path}.{key}: expected a string, got {type(val).__name__}")
    return val


def _bool(obj: dict, key: str, path: str) -> bool:
    val = obj[key]
    if not isinstance(val, bool):
        raise ConfigError(f"{path}.{key}: expected a boolean, got {type(val).__name__}")
    return val


def _pair(raw, path: str) -> tuple[float, float]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError(f"{path}: expected [x, y]")
    return float(raw[0]), float(raw[1])


def _build_satellite(obj: dict, path: str) -> SatelliteGeometry:
    try:
        offsets = tuple(
            (float(r[0]), float(r[1]), float(r[2])) for r in obj["antenna_offsets_m"]
        )
    except (TypeError, ValueError, IndexError):
        raise ConfigError(f"{path}.antenna_offsets_m: expected [[dx, dy, dz], ...]")
    try:
        centers = tuple(
            GroundPosition(*_pair(r, f"{path}.beam_centers_km"))
            for r in obj["beam_centers_km"]
        )
    except TypeError:
        raise ConfigError(f"{path}.beam_centers_km: expected [[x, y], ...]")
    try:
        return SatelliteGeometry(
            altitude_km=_num(obj, "altitude_km", path),
            antenna_offsets_m=offsets,
            beam_centers=centers,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}")


def _build_link(obj: dict, path: str) -> LinkBudgetParams:
    try:
        return LinkBudgetParams(
            carrier_hz=_num(obj, "carrier_hz", path),
            max_beam_gain=10.0 ** (_num(obj, "max_beam_gain_db", path) / 10.0),
            half_power_beamwidth_rad=math.radians(
                _num(obj, "half_power_beamwidth_deg", path)
            ),
            max_user_gain_db=_num(obj, "max_user_gain_db", path),
            rain_mu_db=_num(obj, "rain_mu_db", path),
            rain_sigma_db=_num(obj, "rain_sigma_db", path),
            noise_bandwidth_hz=_num(obj, "noise_bandwidth_hz", path),
            noise_temperature_k=_num(obj, "noise_temperature_k", path),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}")


def _build_solver(obj: dict, path: str) -> SolverParams:
    try:
        return SolverParams(
            rho=_num(obj, "rho", path),
            epsilon=_num(obj, "epsilon", path),
            delta=_num(obj, "delta", path),
            max_outer=_int(obj, "max_outer", path),
            max_inner=_int(obj, "max_inner", path),
            lipschitz_mode=_str(obj, "lipschitz_mode", path),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}")


def _build_scenario(obj: dict, path: str) -> ScenarioConfig:
    try:
        regions = tuple(
            EveRegion(float(a), float(b), float(c), float(d))
            for a, b, c, d in obj["eve_regions_km"]
        )
    except (TypeError, ValueError):
        raise ConfigError(
            f"{path}.eve_regions_km: expected [[x_lo, x_hi, y_lo, y_hi], ...]"
        )
    try:
        return ScenarioConfig(
            satellite=_build_satellite(obj["satellite"], f"{path}.satellite"),
            link_budget=_build_link(obj["link_budget"], f"{path}.link_budget"),
            lu_position=GroundPosition(*_pair(obj["lu_position_km"], f"{path}.lu_position_km")),
            eve_regions=regions,
            power_dbmw=_num(obj, "power_dbmw", path),
            gamma_th=_num(obj, "gamma_th", path),
            gamma_th_is_db=_bool(obj, "gamma_th_is_db", path),
            beta=_num(obj, "beta", path),
            m1=_int(obj, "grid_m1", path),
            m2=_int(obj, "grid_m2", path),
            solver=_build_solver(obj["solver"], f"{path}.solver"),
            rain_policy=_str(obj, "rain_policy", path),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}")


def parse_config_dict(obj: dict) -> ExperimentSpec:
    """Strictly validate a config dictionary into an ExperimentSpec."""
    merged = _merge(obj, DEFAULT_CONFIG, "config")
    sweep_obj = merged["sweep"]
    values = sweep_obj["values"]
    if not isinstance(values, list) or any(
        isinstance(v, bool) or not isinstance(v, (int, float)) for v in values
    ):
        raise ConfigError("config.sweep.values: expected a list of numbers")
    schemes = merged["schemes"]
    if not isinstance(schemes, list) or any(not isinstance(s, str) for s in schemes):
        raise ConfigError("config.schemes: expected a list of strings")
    return ExperimentSpec(
        scenario=_build_scenario(merged["scenario"], "config.scenario"),
        sweep=SweepSpec(
            kind=_str(merged["sweep"], "kind", "config.sweep"),
            values=tuple(float(v) for v in values),
        ),
        schemes=tuple(schemes),
        mode=_str(merged, "mode", "config"),
        output_dir=_str(merged, "output_dir", "config"),
        seed=_int(merged, "seed", "config"),
    )


def parse_config(path: str) -> ExperimentSpec:
    """Load and strictly validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return parse_config_dict(obj)


def default_scenario() -> ScenarioConfig:
    """The shipped default scenario (see DEFAULT_CONFIG)."""
    return default_spec().scenario


def default_spec() -> ExperimentSpec:
    """ExperimentSpec built from DEFAULT_CONFIG."""
    return parse_config_dict({})


def emit_defaults() -> str:
    """Default configuration as JSON; re-parsing reproduces default_spec()."""
    return json.dumps(DEFAULT_CONFIG, indent=2)
