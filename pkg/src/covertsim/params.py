"""Scenario configuration: declared-unit parameters, validation, dB conversions."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Raised when a configuration document is missing keys or violates an invariant."""


# Baseline scenario: 1 W transmitter, 18 dB satellite antenna, heavily shadowed
# warden link (-40 dB gain, -10 dB excess loss), 600-symbol message, 1 km square,
# UAV at 150 m chasing at 15 m/s.
TABLE1_DEFAULTS = {
    "p_a_dbw": 0.0,
    "g_a_db": 0.0,
    "g_b_db": 18.0,
    "g_w_db": -40.0,
    "k0": 5.0,
    "eta_db": -10.0,
    "m_bits": 600,
    "sigma_w_dbm": -90.0,
    "sigma_b_dbm": -110.0,
    "delta": 0.05,
    "l_s": 20,
    "u": 1000.0,
    "d_ab": 500e3,
    "h_w": 150.0,
    "v_w": 15.0,
    "r_a_proj": 100.0,
    "r_w_proj": 150.0,
    "alpha_los": 1.0,
    "alpha_nlos": 1.5,
    "t_c_minutes": 10.0,
    "lambda_per_min": 0.04,
    "beta_slots": 100,
}

_INT_FIELDS = {"m_bits", "l_s", "beta_slots"}


@dataclass(frozen=True)
class ScenarioConfig:
    p_a_dbw: float
    g_a_db: float
    g_b_db: float
    g_w_db: float
    k0: float
    eta_db: float
    m_bits: int
    sigma_w_dbm: float
    sigma_b_dbm: float
    delta: float
    l_s: int
    u: float
    d_ab: float
    h_w: float
    v_w: float
    r_a_proj: float
    r_w_proj: float
    alpha_los: float
    alpha_nlos: float
    t_c_minutes: float
    lambda_per_min: float
    beta_slots: int

    def __post_init__(self):
        checks = [
            (self.u > 0, "u", "must be positive"),
            (self.d_ab > 0, "d_ab", "must be positive"),
            (self.h_w >= 0, "h_w", "must be non-negative"),
            (self.v_w > 0, "v_w", "must be positive"),
            (self.m_bits >= 1, "m_bits", "must be at least 1"),
            (self.l_s >= 0, "l_s", "must be non-negative"),
            (0 < self.delta < 1, "delta", "must lie in (0,1)"),
            (self.k0 >= 0, "k0", "must be non-negative"),
            (self.r_a_proj >= 0, "r_a_proj", "must be non-negative"),
            (self.r_w_proj > self.r_a_proj, "r_w_proj", "must exceed r_a_proj"),
            (self.r_w_proj < math.sqrt(2) * self.u, "r_w_proj",
             "must be below the square diagonal sqrt(2)*u"),
            (self.t_c_minutes > 0, "t_c_minutes", "must be positive"),
            (self.lambda_per_min > 0, "lambda_per_min", "must be positive"),
            (self.beta_slots >= 1, "beta_slots", "must be at least 1"),
        ]
        for ok, field, msg in checks:
            if not ok:
                raise ConfigError(f"{field} {msg}")

    @property
    def m_symbols(self) -> int:
        # one bit per symbol
        return self.m_bits

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **kwargs) -> "ScenarioConfig":
        return dataclasses.replace(self, **kwargs)


@dataclass(frozen=True)
class LinearConstants:
    p_a_w: float
    g_a: float
    g_b: float
    g_w: float
    eta: float
    sigma_w2_w: float
    sigma_b2_w: float


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def to_linear(cfg: ScenarioConfig) -> LinearConstants:
    """Convert every dB/dBm field to its linear-scale constant (watts where dimensional)."""
    return LinearConstants(
        p_a_w=_db_to_linear(cfg.p_a_dbw),
        g_a=_db_to_linear(cfg.g_a_db),
        g_b=_db_to_linear(cfg.g_b_db),
        g_w=_db_to_linear(cfg.g_w_db),
        eta=_db_to_linear(cfg.eta_db),
        sigma_w2_w=_dbm_to_watts(cfg.sigma_w_dbm),
        sigma_b2_w=_dbm_to_watts(cfg.sigma_b_dbm),
    )


def _coerce(key: str, value):
    if key in _INT_FIELDS:
        iv = int(round(float(value)))
        if abs(iv - float(value)) > 1e-9:
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return iv
    return float(value)


def load_config(source) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a mapping, YAML text, or file path.

    The document must either contain every parameter key or carry a
    ``defaults: table1`` directive, in which case unspecified keys fall back
    to the baseline values.
    """
    if isinstance(source, (str, Path)):
        p = Path(source)
        text = p.read_text() if p.exists() else str(source)
        doc = yaml.safe_load(text)
    else:
        doc = dict(source)
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a key-value mapping")

    doc = dict(doc)
    use_defaults = str(doc.pop("defaults", "")).lower() == "table1"
    unknown = set(doc) - set(TABLE1_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    values = dict(TABLE1_DEFAULTS) if use_defaults else {}
    for key, val in doc.items():
        values[key] = _coerce(key, val)
    missing = set(TABLE1_DEFAULTS) - set(values)
    if missing:
        raise ConfigError(f"missing config keys (add 'defaults: table1' to fill them): "
                          f"{sorted(missing)}")
    return ScenarioConfig(**values)


def apply_overrides(cfg: ScenarioConfig, overrides: list[str]) -> ScenarioConfig:
    """Apply repeatable ``key=value`` override strings to an existing config."""
    updates = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in TABLE1_DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        updates[key] = _coerce(key, raw)
    return cfg.replace(**updates) if updates else cfg


def config_hash(cfg: ScenarioConfig) -> str:
    """Short stable digest of the resolved configuration, for output provenance."""
    payload = json.dumps(cfg.as_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]
