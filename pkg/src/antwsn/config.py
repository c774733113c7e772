"""Run configuration: every knob of a single simulation, plus the flat
key = value file format that surfaces all of them.

Unknown keys are rejected so a typo can never silently fall back to a default.
"""

import math
from dataclasses import dataclass, field, fields

PROTOCOL_NAMES = ("babr", "sc", "ff", "fp", "eeabr", "ieeabr")
LAYOUTS = ("grid", "random-square")
SCENARIOS = ("static", "dynamic")

STREAM_NAMES = ("topology", "traffic", "mobility", "radio", "mac", "protocol")


class ConfigError(Exception):
    pass


@dataclass
class SimConfig:
    # scenario
    protocol: str = "ieeabr"
    nodes: int = 49
    layout: str = "random-square"
    scenario: str = "static"
    duration: float = 100.0
    seed: int = 1
    initial_energy: float | None = None   # None: 30 J static, 60 J dynamic
    traffic_rate: float = 0.5              # data events per second per source
    data_ttl_factor: float = 4.0            # data packet hop budget = factor * nodes
    grid_spacing: float = 20.0
    max_topology_retries: int = 1000
    # sink mobility (dynamic scenario)
    sink_radius_frac: float = 0.25
    sink_update_period: float = 1.0
    # radio
    p_transmit: float = 1.0
    gamma: float = 2.0
    sigma_alpha: float = 0.05
    sigma_beta: float = 2e-4
    tx_radius: float = 35.0
    rx_threshold: float | None = None       # None: derived from tx_radius
    # MAC / link
    bitrate: float = 40_000.0
    cw_init: int = 32
    max_retries: int = 5
    ant_frame_bytes: int = 20
    data_frame_bytes: int = 50
    # energy model
    e_tx_per_bit: float = 1e-6
    e_rx_per_bit: float = 5e-7
    e_idle_per_s: float = 0.0
    # ant machinery
    ant_interval: float = 2.0
    cache_timeout: float = 3.0
    ant_cap_multiplier: int = 5
    ff_delay_max: float = 0.05
    # trip-time model (BABR family)
    eta: float = 0.2
    trip_window: int = 10
    conf_gamma: float = 0.75
    c1: float = 0.7
    c2: float = 0.3
    # pheromone family
    alpha: float = 1.0
    beta: float = 1.0
    rho: float = 0.1
    phi: float = 1.0
    dtau_max: float = 1.0
    tau0: float | None = None  # fresh pheromone per entry; None: 1/n
    # SC
    sc_beta: float = 1.0
    # optional per-stream seed overrides (default: derived from `seed`)
    seed_topology: int | None = None
    seed_traffic: int | None = None
    seed_mobility: int | None = None
    seed_radio: int | None = None
    seed_mac: int | None = None
    seed_protocol: int | None = None

    def __post_init__(self):
        self.protocol = self.protocol.lower()
        self.validate()

    def validate(self):
        if self.protocol not in PROTOCOL_NAMES:
            raise ConfigError(f"unknown protocol {self.protocol!r}, expected one of {PROTOCOL_NAMES}")
        if self.layout not in LAYOUTS:
            raise ConfigError(f"unknown layout {self.layout!r}")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.nodes < 2:
            raise ConfigError("nodes must be >= 2")
        if self.layout == "grid" and math.isqrt(self.nodes) ** 2 != self.nodes:
            raise ConfigError(f"grid layout needs a perfect-square node count, got {self.nodes}")
        if self.duration <= 0:
            raise ConfigError("duration must be > 0")
        if self.traffic_rate <= 0:
            raise ConfigError("traffic_rate must be > 0")
        if self.initial_energy is not None and self.initial_energy <= 0:
            raise ConfigError("initial_energy must be > 0")
        if not (2.0 <= self.gamma <= 4.0):
            raise ConfigError("gamma must lie in [2, 4]")
        if self.sigma_alpha < 0 or self.sigma_beta < 0:
            raise ConfigError("disturbance sigmas must be >= 0")
        if abs(self.c1 + self.c2 - 1.0) > 1e-9:
            raise ConfigError("reinforcement weights c1 + c2 must equal 1")
        if not (0 < self.eta < 1):
            raise ConfigError("eta must lie in (0, 1)")
        if not (0 < self.rho < 1):
            raise ConfigError("rho must lie in (0, 1)")
        if self.phi <= 0:
            raise ConfigError("phi must be > 0")
        if self.tau0 is not None and self.tau0 <= 0:
            raise ConfigError("tau0 must be > 0")
        if self.ant_cap_multiplier < 1:
            raise ConfigError("ant_cap_multiplier must be >= 1")
        if not (0 < self.conf_gamma < 1):
            raise ConfigError("conf_gamma must lie in (0, 1)")
        if self.ant_interval <= 0 or self.cache_timeout <= 0:
            raise ConfigError("ant_interval and cache_timeout must be > 0")
        if self.trip_window < 1:
            raise ConfigError("trip_window must be >= 1")

    @property
    def energy_budget(self) -> float:
        if self.initial_energy is not None:
            return self.initial_energy
        return 60.0 if self.scenario == "dynamic" else 30.0

    @property
    def ant_bits(self) -> int:
        return self.ant_frame_bytes * 8

    @property
    def data_bits(self) -> int:
        return self.data_frame_bytes * 8

    def stream_overrides(self) -> dict:
        out = {}
        for name in STREAM_NAMES:
            v = getattr(self, f"seed_{name}")
            if v is not None:
                out[name] = v
        return out

    def replace(self, **kwargs) -> "SimConfig":
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        vals.update(kwargs)
        return SimConfig(**vals)


# Annotations may surface as type objects or as strings depending on how the
# module is evaluated; accept both spellings.
_FIELD_TYPES = {f.name: f.type for f in fields(SimConfig)}
_INT_FIELDS = {f.name for f in fields(SimConfig)
               if f.type in (int, int | None, "int", "int | None")}
_FLOAT_FIELDS = {f.name for f in fields(SimConfig)
                 if f.type in (float, float | None, "float", "float | None")}
_STR_FIELDS = {f.name for f in fields(SimConfig) if f.type in (str, "str")}


def _convert(key: str, raw: str):
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"key {key!r} expects an integer, got {raw!r}") from None
    if key in _FLOAT_FIELDS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"key {key!r} expects a number, got {raw!r}") from None
    return raw


def parse_kv_text(text: str) -> dict:
    """Parse `key = value` lines; '#' starts a comment, blank lines are ignored."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def config_from_mapping(mapping: dict) -> SimConfig:
    known = set(_FIELD_TYPES)
    values = {}
    for key, raw in mapping.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _convert(key, raw) if isinstance(raw, str) else raw
    return SimConfig(**values)


def load_config(path: str) -> SimConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_mapping(parse_kv_text(fh.read()))
