"""System parameters, unit conversions, and baseline defaults.

All quantities are stored in linear SI units (watts, meters, hertz); dB
appears only at the I/O boundary. The defaults describe a 20 MHz macro
deployment: 40 W downlink / 200 mW uplink budgets, pathloss exponent 2.5,
8 dB lognormal shadowing, 100-antenna full-duplex base stations each serving
10 downlink and 10 uplink single-antenna users, 30 pilots per cell, 5-bit
DACs, and a two-tier hexagonal lattice with 500 m inter-site distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

_INT_FIELDS = {
    "n_antennas", "k_downlink_per_cell", "k_uplink_per_cell",
    "n_pilots_per_cell", "coherence_tile_nc", "tiers", "n_drops", "base_seed",
}


def db_to_linear(x_db: float) -> float:
    """dB -> linear power ratio."""
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Linear power ratio -> dB."""
    if x <= 0.0:
        raise ValueError("dB conversion requires a positive value")
    return 10.0 * math.log10(x)


def dbm_to_w(x_dbm: float) -> float:
    """dBm -> watts."""
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def w_to_dbm(x_w: float) -> float:
    """Watts -> dBm."""
    return linear_to_db(x_w) + 30.0


@dataclass(frozen=True)
class Scenario:
    """Immutable bundle of every system parameter and simulation control.

    Safe to share read-only across worker processes. `adc_bits` is a float
    so that `math.inf` can act as the ideal-DAC sentinel; finite values must
    be integers >= 1.
    """

    bandwidth_hz: float = 20e6
    pathloss_exponent_eta: float = 2.5
    shadowing_sigma_db: float = 8.0
    p_downlink_w: float = 40.0
    p_uplink_w: float = 0.2
    noise_psd_dbm_hz: float = -174.0
    noise_figure_db: float = 3.0
    bs_antenna_gain_db: float = 12.0
    n_antennas: int = 100
    k_downlink_per_cell: int = 10
    k_uplink_per_cell: int = 10
    n_pilots_per_cell: int = 30
    pilot_overhead_fraction_beta: float = 0.5
    coherence_tile_nc: int = 20000
    adc_bits: float = 5
    tiers: int = 2
    inter_site_distance_m: float = 500.0
    min_link_distance_m: float = 10.0
    pathloss_intercept_lref: float = db_to_linear(12.0)
    n_drops: int = 10000
    base_seed: int = 42

    def __post_init__(self):
        if self.pathloss_exponent_eta <= 2.0:
            raise ValueError("pathloss_exponent_eta must exceed 2")
        if not 0.0 <= self.pilot_overhead_fraction_beta <= 1.0:
            raise ValueError("pilot_overhead_fraction_beta must lie in [0, 1]")
        if self.n_pilots_per_cell > self.coherence_tile_nc:
            raise ValueError("n_pilots_per_cell cannot exceed coherence_tile_nc")
        for name in ("bandwidth_hz", "p_downlink_w", "p_uplink_w",
                     "inter_site_distance_m", "min_link_distance_m",
                     "pathloss_intercept_lref", "shadowing_sigma_db"):
            if getattr(self, name) < 0.0 or (name != "shadowing_sigma_db"
                                             and getattr(self, name) == 0.0):
                raise ValueError(f"{name} must be strictly positive")
        for name in ("n_antennas", "k_downlink_per_cell", "n_pilots_per_cell",
                     "coherence_tile_nc", "n_drops"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive count")
        if self.k_uplink_per_cell < 0:
            raise ValueError("k_uplink_per_cell must be nonnegative")
        if self.tiers < 0:
            raise ValueError("tiers must be nonnegative")
        if not math.isinf(self.adc_bits):
            if self.adc_bits < 1 or self.adc_bits != int(self.adc_bits):
                raise ValueError("adc_bits must be an integer >= 1 or infinity")

    def with_overrides(self, **overrides) -> "Scenario":
        """Copy with the named fields replaced (field names validated)."""
        valid = {f.name for f in fields(self)}
        unknown = set(overrides) - valid
        if unknown:
            raise KeyError(f"unknown scenario field(s): {', '.join(sorted(unknown))}")
        return replace(self, **overrides)


def default_scenario() -> Scenario:
    """The baseline parameter set (see the class docstring)."""
    return Scenario()


def noise_power_w(scenario: Scenario) -> float:
    """Thermal noise power N_0 over the signal bandwidth, noise figure included."""
    if scenario.bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be positive")
    n0_dbm = (scenario.noise_psd_dbm_hz
              + 10.0 * math.log10(scenario.bandwidth_hz)
              + scenario.noise_figure_db)
    return dbm_to_w(n0_dbm)


def forward_reverse_ratio(scenario: Scenario) -> float:
    """Ratio of downlink to uplink SNR for a common link (gain and noise cancel)."""
    return scenario.p_downlink_w / scenario.p_uplink_w


def ue_pathloss_intercept(scenario: Scenario) -> float:
    """UE-to-UE pathloss intercept: the BS intercept with the BS antenna gain removed."""
    return scenario.pathloss_intercept_lref / db_to_linear(scenario.bs_antenna_gain_db)


def _coerce_field(name: str, raw: str):
    value = raw.strip()
    if name in _INT_FIELDS:
        return int(value)
    if name == "adc_bits" and value.lower() in ("inf", "infinity"):
        return math.inf
    return float(value)


def scenario_from_mapping(mapping: dict) -> Scenario:
    """Build a Scenario from string key-value pairs, rejecting unknown keys."""
    valid = {f.name for f in fields(Scenario)}
    parsed = {}
    for key, raw in mapping.items():
        if key not in valid:
            raise KeyError(f"unknown scenario field: {key}")
        parsed[key] = _coerce_field(key, str(raw))
    return Scenario(**parsed)


def scenario_from_file(path: str) -> Scenario:
    """Load a Scenario from a flat `key = value` text file ('#' comments allowed)."""
    mapping = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = text.split("=", 1)
            mapping[key.strip()] = value.strip()
    return scenario_from_mapping(mapping)
