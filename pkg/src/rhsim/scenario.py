"""Scenario configuration: strict YAML schema, bundled presets, digests.

Unknown keys are rejected rather than warned about; a silent typo in a
physics config is worse than a hard failure. Every value is validated
against the preconditions of the module that consumes it before any
computation starts.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np
import yaml

from .channel import RadioConfig
from .errors import ConfigError
from .geometry import ArrayGeometry, UserSet, build_array, place_users


def _number(value, path, minimum=None, exclusive_minimum=None, maximum=None,
            integer=False):
    if isinstance(value, bool):
        raise ConfigError(f"{path}: expected a number, got a boolean")
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"{path}: expected a number, got {value!r}") from None
    if not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}: value must be finite")
    if integer:
        if value != int(value):
            raise ConfigError(f"{path}: expected an integer, got {value}")
        value = int(value)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {value}")
    if exclusive_minimum is not None and value <= exclusive_minimum:
        raise ConfigError(f"{path}: must be > {exclusive_minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}: must be <= {maximum}, got {value}")
    return value


def _choice(value, path, options):
    if value not in options:
        raise ConfigError(f"{path}: must be one of {sorted(options)}, got {value!r}")
    return value


def _section(raw, name):
    data = raw.get(name)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"section '{name}' must be a mapping")
    return data


def _check_keys(data, name, allowed, required=()):
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key '{unknown[0]}' in section '{name}'")
    for key in required:
        if key not in data:
            raise ConfigError(f"section '{name}': missing required key '{key}'")


@dataclass(frozen=True)
class GeometryConfig:
    panels: int
    elements_x: int
    elements_y: int
    dx_m: float
    dy_m: float
    feeds_per_panel: int = 8
    tiling_axis: str = "x"
    platform_height_m: float = 1000.0
    panel_offsets_m: tuple = None

    def build(self) -> ArrayGeometry:
        return build_array(self.panels, self.elements_x, self.elements_y,
                           self.dx_m, self.dy_m, self.feeds_per_panel,
                           self.tiling_axis, (0.0, 0.0, self.platform_height_m),
                           self.panel_offsets_m)


@dataclass(frozen=True)
class UsersConfig:
    count: int
    azimuth_range_deg: tuple = (-50.0, 50.0)
    elevation_deg: float = 0.0
    ground_range_m: float = None
    data_bits: float = 50_000.0


@dataclass(frozen=True)
class HologramConfig:
    threshold: float = 0.5
    mode: str = "binary"


@dataclass(frozen=True)
class ChannelConfig:
    model: str = "auto"
    amplitude_tolerance: float = 0.01


@dataclass(frozen=True)
class LinkConfig:
    precoder: str = "zero-forcing"
    condition_cap: float = 1e12


@dataclass(frozen=True)
class OptimizerConfig:
    min_rate_bps: float = 0.0
    dinkelbach_tol: float = 1e-9
    max_iterations: int = 100
    grid_resolution: int = 100


@dataclass(frozen=True)
class PowerConfig:
    per_element_w: float = 0.0


@dataclass(frozen=True)
class SweepConfig:
    circuit_powers_w: tuple = ()


@dataclass(frozen=True)
class Scenario:
    seed: int
    geometry: GeometryConfig
    radio: RadioConfig
    users: UsersConfig
    hologram: HologramConfig
    channel: ChannelConfig
    link: LinkConfig
    optimizer: OptimizerConfig
    power: PowerConfig
    sweep: SweepConfig

    def build_geometry(self) -> ArrayGeometry:
        return self.geometry.build()

    def build_users(self) -> UserSet:
        u = self.users
        return place_users(u.count, u.azimuth_range_deg, u.elevation_deg,
                           (0.0, 0.0, self.geometry.platform_height_m),
                           u.ground_range_m, u.data_bits, seed=self.seed)

    def to_dict(self) -> dict:
        g = self.geometry
        return {
            "seed": self.seed,
            "geometry": {
                "panels": g.panels, "elements_x": g.elements_x,
                "elements_y": g.elements_y, "dx_m": g.dx_m, "dy_m": g.dy_m,
                "feeds_per_panel": g.feeds_per_panel,
                "tiling_axis": g.tiling_axis,
                "platform_height_m": g.platform_height_m,
                "panel_offsets_m": None if g.panel_offsets_m is None
                else [list(v) for v in g.panel_offsets_m],
            },
            "radio": {
                "carrier_frequency_hz": self.radio.carrier_frequency_hz,
                "bandwidth_hz": self.radio.bandwidth_hz,
                "noise_psd_dbm_hz": self.radio.noise_psd_dbm_hz,
                "tx_power_dbm": self.radio.tx_power_dbm,
                "pa_efficiency": self.radio.pa_efficiency,
                "waveguide_index": self.radio.waveguide_index,
            },
            "users": {
                "count": self.users.count,
                "azimuth_range_deg": list(self.users.azimuth_range_deg),
                "elevation_deg": self.users.elevation_deg,
                "ground_range_m": self.users.ground_range_m,
                "data_bits": self.users.data_bits,
            },
            "hologram": {"threshold": self.hologram.threshold,
                         "mode": self.hologram.mode},
            "channel": {"model": self.channel.model,
                        "amplitude_tolerance": self.channel.amplitude_tolerance},
            "link": {"precoder": self.link.precoder,
                     "condition_cap": self.link.condition_cap},
            "optimizer": {
                "min_rate_bps": self.optimizer.min_rate_bps,
                "dinkelbach_tol": self.optimizer.dinkelbach_tol,
                "max_iterations": self.optimizer.max_iterations,
                "grid_resolution": self.optimizer.grid_resolution,
            },
            "power": {"per_element_w": self.power.per_element_w},
            "sweep": {"circuit_power_w": list(self.sweep.circuit_powers_w)},
        }

    @property
    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()

    def with_seed(self, seed) -> "Scenario":
        return replace(self, seed=int(seed))


_TOP_LEVEL = {"seed", "geometry", "radio", "users", "hologram", "channel",
              "link", "optimizer", "power", "sweep"}


def _parse_geometry(raw) -> GeometryConfig:
    data = _section(raw, "geometry")
    _check_keys(data, "geometry",
                ["panels", "elements_x", "elements_y", "dx_m", "dy_m",
                 "feeds_per_panel", "tiling_axis", "platform_height_m",
                 "panel_offsets_m"],
                required=["panels", "elements_x", "elements_y", "dx_m", "dy_m"])
    offsets = data.get("panel_offsets_m")
    if offsets is not None:
        if not isinstance(offsets, list) or any(len(v) != 3 for v in offsets):
            raise ConfigError("geometry.panel_offsets_m must be a list of [x, y, z]")
        offsets = tuple(tuple(_number(x, "geometry.panel_offsets_m") for x in v)
                        for v in offsets)
    return GeometryConfig(
        panels=_number(data["panels"], "geometry.panels", minimum=1, integer=True),
        elements_x=_number(data["elements_x"], "geometry.elements_x", minimum=1, integer=True),
        elements_y=_number(data["elements_y"], "geometry.elements_y", minimum=1, integer=True),
        dx_m=_number(data["dx_m"], "geometry.dx_m", exclusive_minimum=0.0),
        dy_m=_number(data["dy_m"], "geometry.dy_m", exclusive_minimum=0.0),
        feeds_per_panel=_number(data.get("feeds_per_panel", 8),
                                "geometry.feeds_per_panel", minimum=1, integer=True),
        tiling_axis=_choice(data.get("tiling_axis", "x"), "geometry.tiling_axis",
                            {"x", "y"}),
        platform_height_m=_number(data.get("platform_height_m", 1000.0),
                                  "geometry.platform_height_m", exclusive_minimum=0.0),
        panel_offsets_m=offsets,
    )


def _parse_radio(raw) -> RadioConfig:
    data = _section(raw, "radio")
    _check_keys(data, "radio",
                ["carrier_frequency_hz", "bandwidth_hz", "noise_psd_dbm_hz",
                 "tx_power_dbm", "pa_efficiency", "waveguide_index"],
                required=["carrier_frequency_hz", "bandwidth_hz"])
    return RadioConfig(
        carrier_frequency_hz=_number(data["carrier_frequency_hz"],
                                     "radio.carrier_frequency_hz", exclusive_minimum=0.0),
        bandwidth_hz=_number(data["bandwidth_hz"], "radio.bandwidth_hz",
                             exclusive_minimum=0.0),
        noise_psd_dbm_hz=_number(data.get("noise_psd_dbm_hz", -174.0),
                                 "radio.noise_psd_dbm_hz"),
        tx_power_dbm=_number(data.get("tx_power_dbm", 23.0), "radio.tx_power_dbm"),
        pa_efficiency=_number(data.get("pa_efficiency", 1.0), "radio.pa_efficiency",
                              exclusive_minimum=0.0, maximum=1.0),
        waveguide_index=_number(data.get("waveguide_index", math.sqrt(3.0)),
                                "radio.waveguide_index", minimum=1.0),
    )


def _parse_users(raw) -> UsersConfig:
    data = _section(raw, "users")
    _check_keys(data, "users",
                ["count", "azimuth_range_deg", "elevation_deg", "ground_range_m",
                 "data_bits"], required=["count"])
    span = data.get("azimuth_range_deg", [-50.0, 50.0])
    if not isinstance(span, (list, tuple)) or len(span) != 2:
        raise ConfigError("users.azimuth_range_deg must be [low, high]")
    lo = _number(span[0], "users.azimuth_range_deg[0]")
    hi = _number(span[1], "users.azimuth_range_deg[1]")
    if lo > hi:
        raise ConfigError("users.azimuth_range_deg must be ordered low <= high")
    ground = data.get("ground_range_m")
    if ground is not None:
        ground = _number(ground, "users.ground_range_m", minimum=0.0)
    return UsersConfig(
        count=_number(data["count"], "users.count", minimum=1, integer=True),
        azimuth_range_deg=(lo, hi),
        elevation_deg=_number(data.get("elevation_deg", 0.0), "users.elevation_deg"),
        ground_range_m=ground,
        data_bits=_number(data.get("data_bits", 50_000.0), "users.data_bits",
                          exclusive_minimum=0.0),
    )


def _parse_sweep(raw) -> SweepConfig:
    data = _section(raw, "sweep")
    _check_keys(data, "sweep", ["circuit_power_w"])
    spec = data.get("circuit_power_w",
                    {"start": 1.0, "stop": 10.0, "points": 12, "spacing": "log"})
    if isinstance(spec, dict):
        _check_keys(spec, "sweep.circuit_power_w", ["start", "stop", "points", "spacing"],
                    required=["start", "stop", "points"])
        start = _number(spec["start"], "sweep.circuit_power_w.start", minimum=0.0)
        stop = _number(spec["stop"], "sweep.circuit_power_w.stop", minimum=0.0)
        points = _number(spec["points"], "sweep.circuit_power_w.points",
                         minimum=2, integer=True)
        spacing = _choice(spec.get("spacing", "log"), "sweep.circuit_power_w.spacing",
                          {"linear", "log"})
        if stop <= start:
            raise ConfigError("sweep.circuit_power_w: stop must exceed start")
        if spacing == "log":
            if start <= 0:
                raise ConfigError("sweep.circuit_power_w: log spacing needs start > 0")
            values = np.logspace(math.log10(start), math.log10(stop), points)
        else:
            values = np.linspace(start, stop, points)
        powers = tuple(float(v) for v in values)
    elif isinstance(spec, (list, tuple)):
        powers = tuple(_number(v, "sweep.circuit_power_w[]", minimum=0.0) for v in spec)
        if not powers:
            raise ConfigError("sweep.circuit_power_w must not be empty")
        if any(b <= a for a, b in zip(powers, powers[1:])):
            raise ConfigError("sweep.circuit_power_w must be strictly increasing")
    else:
        raise ConfigError("sweep.circuit_power_w must be a list or a range mapping")
    return SweepConfig(circuit_powers_w=powers)


def scenario_from_dict(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("scenario must be a mapping of sections")
    unknown = sorted(set(raw) - _TOP_LEVEL)
    if unknown:
        raise ConfigError(f"unknown top-level section or key '{unknown[0]}'")
    for name in ("geometry", "radio", "users"):
        if name not in raw:
            raise ConfigError(f"missing required section '{name}'")

    holo = _section(raw, "hologram")
    _check_keys(holo, "hologram", ["threshold", "mode"])
    chan = _section(raw, "channel")
    _check_keys(chan, "channel", ["model", "amplitude_tolerance"])
    link = _section(raw, "link")
    _check_keys(link, "link", ["precoder", "condition_cap"])
    opt = _section(raw, "optimizer")
    _check_keys(opt, "optimizer", ["min_rate_bps", "dinkelbach_tol",
                                   "max_iterations", "grid_resolution"])
    power = _section(raw, "power")
    _check_keys(power, "power", ["per_element_w"])

    return Scenario(
        seed=_number(raw.get("seed", 0), "seed", minimum=0, integer=True),
        geometry=_parse_geometry(raw),
        radio=_parse_radio(raw),
        users=_parse_users(raw),
        hologram=HologramConfig(
            threshold=_number(holo.get("threshold", 0.5), "hologram.threshold",
                              minimum=0.0, maximum=1.0),
            mode=_choice(holo.get("mode", "binary"), "hologram.mode",
                         {"binary", "continuous"}),
        ),
        channel=ChannelConfig(
            model=_choice(chan.get("model", "auto"), "channel.model",
                          {"auto", "upw", "usw", "nusw"}),
            amplitude_tolerance=_number(chan.get("amplitude_tolerance", 0.01),
                                        "channel.amplitude_tolerance",
                                        exclusive_minimum=0.0),
        ),
        link=LinkConfig(
            precoder=_choice(link.get("precoder", "zero-forcing"), "link.precoder",
                             {"zero-forcing", "matched-filter"}),
            condition_cap=_number(link.get("condition_cap", 1e12),
                                  "link.condition_cap", exclusive_minimum=0.0),
        ),
        optimizer=OptimizerConfig(
            min_rate_bps=_number(opt.get("min_rate_bps", 0.0),
                                 "optimizer.min_rate_bps", minimum=0.0),
            dinkelbach_tol=_number(opt.get("dinkelbach_tol", 1e-9),
                                   "optimizer.dinkelbach_tol", exclusive_minimum=0.0),
            max_iterations=_number(opt.get("max_iterations", 100),
                                   "optimizer.max_iterations", minimum=1, integer=True),
            grid_resolution=_number(opt.get("grid_resolution", 100),
                                    "optimizer.grid_resolution", minimum=2, integer=True),
        ),
        power=PowerConfig(
            per_element_w=_number(power.get("per_element_w", 0.0),
                                  "power.per_element_w", minimum=0.0),
        ),
        sweep=_parse_sweep(raw),
    )


def list_presets() -> list:
    root = resources.files("rhsim") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_scenario(path_or_preset) -> Scenario:
    """Load a scenario from a YAML file path or a bundled preset name."""
    name = str(path_or_preset)
    if name in list_presets():
        text = (resources.files("rhsim") / "presets" / f"{name}.yaml").read_text()
    else:
        try:
            with open(name, "r", encoding="utf-8") as fh:
                text = fh.read()
        except FileNotFoundError:
            raise ConfigError(
                f"no such scenario file or preset: {name!r} "
                f"(presets: {', '.join(list_presets())})") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"cannot parse scenario{where}: {exc}") from None
    if raw is None:
        raise ConfigError("scenario file is empty")
    return scenario_from_dict(raw)


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(scenario.to_dict(), fh, sort_keys=True)
