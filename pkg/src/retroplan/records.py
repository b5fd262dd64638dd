"""Canonical dwelling record and its category domains.

Category labels mirror the UK EPC bulk download vocabulary; parsers are
tolerant of the usual formatting noise (case, spacing, "England and Wales:"
prefixes) but reject labels outside the known domains.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


class PropertyType(Enum):
    HOUSE = "House"
    FLAT = "Flat"
    BUNGALOW = "Bungalow"
    MAISONETTE = "Maisonette"
    PARK_HOME = "Park Home"


class BuiltForm(Enum):
    DETACHED = "Detached"
    SEMI_DETACHED = "Semi-Detached"
    END_TERRACE = "End-Terrace"
    MID_TERRACE = "Mid-Terrace"
    ENCLOSED_END_TERRACE = "Enclosed End-Terrace"
    ENCLOSED_MID_TERRACE = "Enclosed Mid-Terrace"


class AgeBand(Enum):
    PRE_1900 = "pre1900"
    B1900_1929 = "1900-1929"
    B1930_1949 = "1930-1949"
    B1950_1966 = "1950-1966"
    B1967_1975 = "1967-1975"
    B1976_1982 = "1976-1982"
    B1983_1990 = "1983-1990"
    B1991_1995 = "1991-1995"
    B1996_2002 = "1996-2002"
    B2003_2006 = "2003-2006"
    B2007_2011 = "2007-2011"
    B2012_2022 = "2012-2022"


class Fuel(Enum):
    GAS = "Gas"
    ELECTRICITY = "Electricity"


LONDON_BOROUGHS = (
    "Barking and Dagenham",
    "Barnet",
    "Bexley",
    "Brent",
    "Bromley",
    "Camden",
    "City of London",
    "Croydon",
    "Ealing",
    "Enfield",
    "Greenwich",
    "Hackney",
    "Hammersmith and Fulham",
    "Haringey",
    "Harrow",
    "Havering",
    "Hillingdon",
    "Hounslow",
    "Islington",
    "Kensington and Chelsea",
    "Kingston upon Thames",
    "Lambeth",
    "Lewisham",
    "Merton",
    "Newham",
    "Redbridge",
    "Richmond upon Thames",
    "Southwark",
    "Sutton",
    "Tower Hamlets",
    "Waltham Forest",
    "Wandsworth",
    "Westminster",
)


def _normalise_label(label: str) -> str:
    cleaned = label.strip().replace("&", "and")
    cleaned = re.sub(r"\s+", " ", cleaned)
    return cleaned.casefold()


class BoroughRegistry:
    """Extensible registry of local authority names.

    Lookup is tolerant of case, stray whitespace and "&" vs "and"; new
    authorities can be registered to run the pipeline outside London.
    """

    def __init__(self, names=LONDON_BOROUGHS):
        self._by_key: dict[str, str] = {}
        for name in names:
            self.register(name)

    def register(self, canonical_name: str) -> None:
        self._by_key[_normalise_label(canonical_name)] = canonical_name

    def resolve(self, label: str) -> str:
        """Return the canonical name for ``label``.

        Raises KeyError (with the offending label) when unknown.
        """
        key = _normalise_label(label)
        if key not in self._by_key:
            raise KeyError(label)
        return self._by_key[key]

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_key.values()))


DEFAULT_BOROUGHS = BoroughRegistry()

_PROPERTY_ALIASES = {
    "house": PropertyType.HOUSE,
    "flat": PropertyType.FLAT,
    "bungalow": PropertyType.BUNGALOW,
    "maisonette": PropertyType.MAISONETTE,
    "park home": PropertyType.PARK_HOME,
    "parkhome": PropertyType.PARK_HOME,
    "park_home": PropertyType.PARK_HOME,
}

_BUILT_FORM_ALIASES = {
    "detached": BuiltForm.DETACHED,
    "semi-detached": BuiltForm.SEMI_DETACHED,
    "semi detached": BuiltForm.SEMI_DETACHED,
    "semidetached": BuiltForm.SEMI_DETACHED,
    "end-terrace": BuiltForm.END_TERRACE,
    "end terrace": BuiltForm.END_TERRACE,
    "endterrace": BuiltForm.END_TERRACE,
    "mid-terrace": BuiltForm.MID_TERRACE,
    "mid terrace": BuiltForm.MID_TERRACE,
    "midterrace": BuiltForm.MID_TERRACE,
    "enclosed end-terrace": BuiltForm.ENCLOSED_END_TERRACE,
    "enclosed end terrace": BuiltForm.ENCLOSED_END_TERRACE,
    "enclosed mid-terrace": BuiltForm.ENCLOSED_MID_TERRACE,
    "enclosed mid terrace": BuiltForm.ENCLOSED_MID_TERRACE,
}

_AGE_RANGE = re.compile(r"(\d{4})\s*[-–]\s*(\d{4})")
_AGE_SINGLE_YEAR = re.compile(r"(\d{4})")

_AGE_BY_RANGE = {(int(b.value[:4]), int(b.value[5:])): b for b in AgeBand if b is not AgeBand.PRE_1900}


def parse_property_type(label: str) -> PropertyType:
    key = _normalise_label(label)
    if key not in _PROPERTY_ALIASES:
        raise ValueError(f"unknown property type: {label!r}")
    return _PROPERTY_ALIASES[key]


def parse_built_form(label: str) -> BuiltForm:
    key = _normalise_label(label)
    if key not in _BUILT_FORM_ALIASES:
        raise ValueError(f"unknown built form: {label!r}")
    return _BUILT_FORM_ALIASES[key]


def parse_age_band(label: str) -> AgeBand:
    """Map an age label ("1930-1949", "England and Wales: before 1900",
    "2012 onwards", ...) onto one of the twelve construction bands."""
    key = _normalise_label(label)
    key = key.split(":", 1)[-1].strip()
    if key in ("pre1900", "pre 1900", "before 1900", "pre-1900"):
        return AgeBand.PRE_1900
    m = _AGE_RANGE.search(key)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if (lo, hi) in _AGE_BY_RANGE:
            return _AGE_BY_RANGE[(lo, hi)]
        raise ValueError(f"unknown age band: {label!r}")
    m = _AGE_SINGLE_YEAR.search(key)
    if m and ("onward" in key or "onwards" in key):
        year = int(m.group(1))
        for (lo, hi), band in _AGE_BY_RANGE.items():
            if lo <= year <= hi:
                return band
    raise ValueError(f"unknown age band: {label!r}")


@dataclass(frozen=True)
class DwellingRecord:
    """One cleaned EPC-style observation."""

    id: str
    borough: str
    property_type: PropertyType
    built_form: BuiltForm
    age_band: AgeBand
    floor_area: float  # m2
    annual_consumption: float  # kWh/year
    multi_glaze_proportion: float  # fraction [0,1]
    low_energy_lighting: float  # fraction [0,1]
    loft_insulation_cm: float
    main_fuel: Fuel
    has_heat_pump: bool
    floor_height: Optional[float] = None  # m, may be imputed later
    volume: Optional[float] = None  # m3, derived

    def validate(self) -> None:
        """Raise ValueError naming the first violated field constraint."""
        if self.floor_area <= 10.0:
            raise ValueError("floor_area <= 10 m2")
        if self.annual_consumption <= 0.0:
            raise ValueError("annual_consumption <= 0")
        if not 0.0 <= self.multi_glaze_proportion <= 1.0:
            raise ValueError("multi_glaze_proportion outside [0,1]")
        if not 0.0 <= self.low_energy_lighting <= 1.0:
            raise ValueError("low_energy_lighting outside [0,1]")
        if self.loft_insulation_cm < 0.0:
            raise ValueError("loft_insulation_cm < 0")

    def height_is_valid(self) -> bool:
        return self.floor_height is not None and 1.0 <= self.floor_height <= 10.0

    def with_volume(self, volume: float) -> "DwellingRecord":
        return replace(self, volume=volume)
