"""Physical and economic constants for the four retrofit projects.

Central values follow the published reference profile; every field can be
overridden from a JSON (or TOML, when tomli/tomllib is importable) profile
file. Fields listed in ``CostModel.CALIBRATED`` are back-solved pricing
conventions rather than measured quantities and are flagged as such in
estimate warnings.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .errors import ConfigError

HOURS_PER_YEAR_KW = 8.76  # converts W sustained for a year into kWh


@dataclass(frozen=True)
class ThermalParams:
    """Heat-loss constants for roof and window calculations."""

    kr_over_lr: float = 1.06  # W/(m2 K), uninsulated roof heat transfer coefficient
    kappa_i: float = 0.03  # W/(m K), insulant conductivity
    u_single: float = 5.74  # W/(m2 K)
    u_double: float = 2.7
    u_triple: float = 0.7
    delta_t: float = 10.0  # K, indoor minus outdoor
    # Window-area back-estimation is a calibration and always runs at these
    # fixed reference conditions, even when delta_t / u_single are sampled.
    delta_t_ref: float = 10.0  # K
    u_single_ref: float = 5.74  # W/(m2 K)
    hours_factor: float = HOURS_PER_YEAR_KW

    def __post_init__(self):
        if not self.u_single > self.u_double > self.u_triple > 0:
            raise ConfigError("window U-values must satisfy single > double > triple > 0")
        if self.kr_over_lr <= 0 or self.kappa_i <= 0:
            raise ConfigError("conductances must be positive")
        if self.delta_t <= 0 or self.delta_t_ref <= 0 or self.u_single_ref <= 0:
            raise ConfigError("temperature differences and reference U must be positive")


@dataclass(frozen=True)
class FractionParams:
    """Shares of bare-home demand attributed to each element, plus the
    LED power ratio and the heat-pump electricity fraction."""

    alpha_insulation: float = 0.06
    alpha_windows: float = 0.12
    alpha_lighting: float = 0.03
    alpha_heating: float = 0.6
    led_power_ratio: float = 0.25  # LED power as a fraction of incandescent power
    hp_electricity_fraction: float = 0.25  # electricity drawn per unit of heat displaced

    def __post_init__(self):
        for name in ("alpha_insulation", "alpha_windows", "alpha_lighting",
                     "alpha_heating", "led_power_ratio", "hp_electricity_fraction"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigError(f"{name} must lie in (0,1), got {v}")
        if self.alpha_windows + self.alpha_insulation + self.alpha_lighting >= 1.0:
            raise ConfigError("element demand fractions must sum below 1")


@dataclass(frozen=True)
class ConversionFactors:
    """kWh to kgCO2 and kWh to GBP conversion factors by energy source."""

    co2_gas: float = 0.184  # kgCO2/kWh
    co2_grid: float = 0.20
    gbp_gas: float = 0.08  # GBP/kWh
    gbp_elec: float = 0.30

    def __post_init__(self):
        for name in ("co2_gas", "co2_grid", "gbp_gas", "gbp_elec"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")

    def co2(self, fuel) -> float:
        return self.co2_gas if fuel.value == "Gas" else self.co2_grid

    def gbp(self, fuel) -> float:
        return self.gbp_gas if fuel.value == "Gas" else self.gbp_elec


@dataclass(frozen=True)
class CostModel:
    """Unit costs per project.

    ``install_days_per_m2``, ``led_install_per_bulb``, ``hp_area_threshold``
    and ``hp_large_home`` are calibrated pricing conventions, not quoted
    market rates.
    """

    loft_material: float = 1.5  # GBP per m2 per cm of added depth
    loft_install: float = 15.0  # GBP per m2
    window_material: float = 500.0  # GBP per m2 (double glazing; reused for triple)
    window_day_rate: float = 120.0  # GBP per installer day
    install_days_per_m2: float = 1.45  # days per m2 of window area
    led_unit: float = 7.0  # GBP per bulb
    led_install_per_bulb: float = 3.6
    hp_base: float = 11000.0  # GBP supplied and installed
    hp_large_home: float = 16000.0
    hp_area_threshold: float = 123.0  # m2 floor area above which the large-home rate applies

    CALIBRATED = ("install_days_per_m2", "led_install_per_bulb", "hp_area_threshold", "hp_large_home")

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError(f"{f.name} must be non-negative")


@dataclass(frozen=True)
class GroupPresence:
    """Stock-average presence of efficiency elements for one dwelling group."""

    glazed_fraction: float
    led_fraction: float
    loft_cm: Union[float, None]  # None when the insulation term does not apply


@dataclass(frozen=True)
class ParamSet:
    """Complete parameter profile used by the engine."""

    thermal: ThermalParams = field(default_factory=ThermalParams)
    fractions: FractionParams = field(default_factory=FractionParams)
    conversions: ConversionFactors = field(default_factory=ConversionFactors)
    costs: CostModel = field(default_factory=CostModel)

    def replace(self, **section_updates) -> "ParamSet":
        """Return a copy with per-section field updates, e.g.
        ``params.replace(thermal={"delta_t": 8.0})``."""
        parts = {}
        for section in ("thermal", "fractions", "conversions", "costs"):
            current = getattr(self, section)
            if section in section_updates:
                parts[section] = dataclasses.replace(current, **section_updates[section])
            else:
                parts[section] = current
        return ParamSet(**parts)


DEFAULT_PARAMS = ParamSet()

# Stock-average presence of glazing / LED lighting / loft insulation used to
# rescale a fitted consumption back to the bare reference state.
HOUSE_PRESENCE = GroupPresence(glazed_fraction=0.85, led_fraction=0.53, loft_cm=9.2)
OTHER_PRESENCE = GroupPresence(glazed_fraction=0.78, led_fraction=0.60, loft_cm=None)

_SECTIONS = {
    "thermal": ThermalParams,
    "fractions": FractionParams,
    "conversions": ConversionFactors,
    "costs": CostModel,
}


def params_to_dict(params: ParamSet) -> dict:
    return {name: dataclasses.asdict(getattr(params, name)) for name in _SECTIONS}


def params_from_dict(data: dict) -> ParamSet:
    parts = {}
    for section, cls in _SECTIONS.items():
        payload = dict(data.get(section, {}))
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"unknown {section} fields: {sorted(unknown)}")
        try:
            parts[section] = cls(**payload)
        except TypeError as exc:
            raise ConfigError(f"bad {section} section: {exc}") from exc
    return ParamSet(**parts)


def load_params(path: Union[str, Path]) -> ParamSet:
    """Load a parameter profile from a JSON or TOML file."""
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # py311+
        except ImportError:
            try:
                import tomli as tomllib
            except ImportError as exc:
                raise ConfigError("TOML profiles need Python 3.11+ or the tomli package") from exc
        data = tomllib.loads(raw.decode("utf-8"))
    else:
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"unparseable profile {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("parameter profile must be a table of sections")
    return params_from_dict(data)


def dump_params(params: ParamSet, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(params_to_dict(params), indent=2, sort_keys=True) + "\n")
