"""Seeded Monte-Carlo propagation of parameter uncertainty.

Draw ``i`` of a run is a pure function of ``(seed, i)``: every draw gets its
own counter-based RNG stream, so results are identical no matter how draws
are partitioned across workers.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import engine
from .engine import (Dwelling, EvalMode, HeatPumpPlan, LightingPlan, LoftPlan, SavingsEstimate,
                     WindowsPlan, compose)
from .errors import ConfigError, DataError
from .params import DEFAULT_PARAMS, ParamSet
from .records import BuiltForm, AgeBand, Fuel, PropertyType


class Distribution(Enum):
    NORMAL = "normal"
    POINT_MASS = "point_mass"


@dataclass(frozen=True)
class UncertainParam:
    """A scalar parameter with a sampling distribution."""

    mean: float
    std: float = 0.0
    distribution: Distribution = Distribution.NORMAL
    low: Optional[float] = None
    high: Optional[float] = None
    units: str = ""

    def __post_init__(self):
        if self.std < 0:
            raise ConfigError("std must be non-negative")
        if self.low is not None and self.high is not None and self.low >= self.high:
            raise ConfigError("truncation bounds must be ordered")
        if self.distribution is Distribution.POINT_MASS and self.std != 0.0:
            raise ConfigError("a point mass has zero std")

    def acceptance_mass(self) -> float:
        if self.std == 0.0:
            return 1.0
        lo = -math.inf if self.low is None else (self.low - self.mean) / self.std
        hi = math.inf if self.high is None else (self.high - self.mean) / self.std
        return 0.5 * (math.erf(hi / math.sqrt(2)) - math.erf(lo / math.sqrt(2)))

    def sample(self, rng: np.random.Generator) -> float:
        if self.distribution is Distribution.POINT_MASS or self.std == 0.0:
            return self.mean
        if (self.low is not None or self.high is not None) and self.acceptance_mass() < 1e-6:
            raise ConfigError(f"truncation bounds retain less than 1e-6 probability mass: {self}")
        lo = -math.inf if self.low is None else self.low
        hi = math.inf if self.high is None else self.high
        while True:
            value = rng.normal(self.mean, self.std)
            if lo <= value <= hi:
                return value


def point_mass(value: float, units: str = "") -> UncertainParam:
    return UncertainParam(mean=value, distribution=Distribution.POINT_MASS, units=units)


@dataclass(frozen=True)
class PriorSet:
    """One uncertain parameter per quantity the reference error-propagation
    analysis varies. Field order is the per-draw sampling order."""

    external_temp_c: UncertainParam = UncertainParam(12.0, 2.0, units="C")
    setpoint_c: UncertainParam = field(default_factory=lambda: point_mass(20.0, "C"))
    gas_tariff: UncertainParam = UncertainParam(0.08, 0.01, units="GBP/kWh")
    elec_tariff: UncertainParam = UncertainParam(0.30, 0.01, units="GBP/kWh")
    loft_material: UncertainParam = UncertainParam(1.5, 0.5, units="GBP/(m2 cm)")
    loft_install: UncertainParam = UncertainParam(15.0, 5.0, units="GBP/m2")
    window_day_rate: UncertainParam = UncertainParam(120.0, 20.0, units="GBP/day")
    window_material: UncertainParam = UncertainParam(500.0, 100.0, units="GBP/m2")
    u_single: UncertainParam = UncertainParam(5.7, 0.7, units="W/(m2 K)")
    u_double: UncertainParam = UncertainParam(2.7, 0.7, units="W/(m2 K)")
    hp_cost: UncertainParam = UncertainParam(11000.0, 2000.0, units="GBP")
    led_bulb: UncertainParam = UncertainParam(7.0, 2.0, units="GBP")
    e0_kwh_year: UncertainParam = UncertainParam(29530.0, 28.0, units="kWh/yr")
    co2_kg_year: UncertainParam = UncertainParam(5906.0, 6.0, units="kgCO2/yr")

    def names(self) -> tuple:
        return tuple(f.name for f in fields(self))

    def get(self, name: str) -> UncertainParam:
        return getattr(self, name)

    def replace(self, **updates) -> "PriorSet":
        return dataclasses.replace(self, **updates)

    def as_point_masses(self) -> "PriorSet":
        return PriorSet(**{f.name: point_mass(self.get(f.name).mean, self.get(f.name).units)
                           for f in fields(self)})


DEFAULT_PRIORS = PriorSet()


def draw_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one draw; a pure function of (seed, index).

    Counter-based: the key carries the run seed and the draw index sits in
    the high word of the 256-bit counter, so streams never overlap no matter
    how many variates one draw consumes (rejection resampling included).
    """
    bitgen = np.random.Philox(key=int(seed) & (2**64 - 1), counter=[0, 0, 0, int(index)])
    return np.random.Generator(bitgen)


def sample_priors(priors: PriorSet, rng: np.random.Generator) -> dict:
    """Sample every prior in declared field order."""
    return {name: priors.get(name).sample(rng) for name in priors.names()}


class DrawRejected(Exception):
    """Raised by an evaluation closure to reject one parameter draw."""


class PropagationError(DataError):
    pass


@dataclass(frozen=True)
class McSummary:
    """Sample statistics for one output column, pandas-describe style:
    std uses ddof=1, quantiles interpolate linearly between order stats."""

    n: int
    mean: float
    std: float
    min: float
    q25: float
    q50: float
    q75: float
    max: float

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "McSummary":
        arr = np.asarray(samples, dtype=float)
        if arr.size == 0:
            raise PropagationError("cannot summarise an empty sample")
        q25, q50, q75 = np.percentile(arr, [25, 50, 75], method="linear")
        return cls(n=int(arr.size), mean=float(arr.mean()),
                   std=float(arr.std(ddof=1)) if arr.size > 1 else 0.0,
                   min=float(arr.min()), q25=float(q25), q50=float(q50),
                   q75=float(q75), max=float(arr.max()))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class McResult:
    summaries: dict  # column -> McSummary
    n_requested: int
    n_rejected: int
    seed: int

    def __getitem__(self, column: str) -> McSummary:
        return self.summaries[column]


def propagate(evaluation: Callable[[Mapping[str, float]], Mapping[str, float]],
              priors: PriorSet = DEFAULT_PRIORS, n: int = 1000, seed: int = 0,
              clamp_nonnegative: bool = False,
              money_columns: Sequence[str] = ("money_gbp",)) -> McResult:
    """Propagate the priors through ``evaluation`` over ``n`` draws.

    The closure receives one sampled value per prior and returns a mapping
    of output columns. Draws it rejects (DrawRejected) are recorded; more
    than 50% rejected aborts with a diagnostic. With ``clamp_nonnegative``,
    the named money columns are floored at zero before summarising.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    columns: dict[str, list] = {}
    rejected = 0
    first_rule = None
    for i in range(n):
        values = sample_priors(priors, draw_rng(seed, i))
        try:
            outputs = evaluation(values)
        except DrawRejected as exc:
            rejected += 1
            if first_rule is None:
                first_rule = str(exc)
            continue
        for key, value in outputs.items():
            columns.setdefault(key, []).append(float(value))
    if rejected > n / 2:
        raise PropagationError(
            f"{rejected}/{n} draws rejected (first: {first_rule}); priors are inconsistent "
            f"with the evaluation's domain")
    if not columns:
        raise PropagationError("evaluation produced no outputs")
    if clamp_nonnegative:
        for key in money_columns:
            if key in columns:
                columns[key] = [max(v, 0.0) for v in columns[key]]
    summaries = {key: McSummary.from_samples(vals) for key, vals in columns.items()}
    return McResult(summaries=summaries, n_requested=n, n_rejected=rejected, seed=seed)


# --- the reference single-dwelling analysis -------------------------------

SCENARIO_PROJECTS = {
    "A": (engine.WINDOWS, engine.LOFT),
    "B": (engine.LOFT, engine.WINDOWS, engine.LIGHTING),
    "C": (engine.LOFT, engine.WINDOWS, engine.HEAT_PUMP),
    "D": (engine.WINDOWS, engine.LIGHTING, engine.LOFT, engine.HEAT_PUMP),
}


@dataclass(frozen=True)
class DwellingProfile:
    """A what-if evaluation subject: the dwelling plus its current upgrade
    state and the per-project targets."""

    property_type: PropertyType = PropertyType.HOUSE
    built_form: BuiltForm = BuiltForm.SEMI_DETACHED
    age_band: AgeBand = AgeBand.B1930_1949
    fuel: Fuel = Fuel.GAS
    floor_area: float = 109.0
    loft_area: Optional[float] = None  # None: floor area
    glazed_fraction: float = 0.0
    led_fraction: float = 0.0
    loft_current_cm: float = 0.0
    loft_target_cm: float = 15.0
    glazing_route: engine.GlazingRoute = engine.GlazingRoute.AUTO
    n_bulbs: int = 12
    e0_kwh_year: Optional[float] = None  # None: take the e0 prior's draw


BARE_HOUSE = DwellingProfile()


def _plan_for(project: str, profile: DwellingProfile, mode: EvalMode):
    if project == engine.LOFT:
        return LoftPlan(target_cm=profile.loft_target_cm, current_cm=profile.loft_current_cm,
                        mode=mode, area_m2=profile.loft_area)
    if project == engine.WINDOWS:
        return WindowsPlan(glazed_fraction=profile.glazed_fraction, route=profile.glazing_route,
                           mode=mode)
    if project == engine.LIGHTING:
        return LightingPlan(led_fraction=profile.led_fraction, n_bulbs=profile.n_bulbs)
    if project == engine.HEAT_PUMP:
        return HeatPumpPlan()
    raise ValueError(f"unknown project: {project}")


def evaluate_with_draw(projects: Sequence[str], profile: DwellingProfile,
                       values: Mapping[str, float],
                       base_params: ParamSet = DEFAULT_PARAMS,
                       mode: EvalMode = EvalMode.AREA) -> SavingsEstimate:
    """Evaluate one parameter draw. Physically impossible draws (non-positive
    temperature difference, inverted U-values) are rejected."""
    delta_t = values["setpoint_c"] - values["external_temp_c"]
    if delta_t <= 0:
        raise DrawRejected("sampled external temperature above the setpoint")
    if values["u_single"] <= values["u_double"]:
        raise DrawRejected("sampled single-glazed U-value at or below double-glazed")
    try:
        params = base_params.replace(
            thermal={"u_single": values["u_single"], "u_double": values["u_double"],
                     "delta_t": delta_t},
            conversions={"gbp_gas": values["gas_tariff"], "gbp_elec": values["elec_tariff"]},
            costs={"loft_material": values["loft_material"], "loft_install": values["loft_install"],
                   "window_day_rate": values["window_day_rate"],
                   "window_material": values["window_material"],
                   "hp_base": values["hp_cost"], "led_unit": values["led_bulb"]},
        )
    except ConfigError as exc:
        # A draw outside a parameter's physical domain (e.g. a negative cost
        # rate from an untruncated prior) rejects that draw, not the run.
        raise DrawRejected(str(exc)) from None
    e0 = profile.e0_kwh_year if profile.e0_kwh_year is not None else values["e0_kwh_year"]
    dwelling = Dwelling(e0_kwh_year=e0, property_type=profile.property_type,
                        fuel=profile.fuel, floor_area=profile.floor_area)
    plans = [_plan_for(p, profile, mode) for p in projects]
    return compose(plans, dwelling, params)


def evaluation_columns(projects: Sequence[str], profile: DwellingProfile,
                       base_params: ParamSet = DEFAULT_PARAMS,
                       mode: EvalMode = EvalMode.AREA) -> Callable:
    """Closure for :func:`propagate` producing the standard output columns."""

    def run(values: Mapping[str, float]) -> dict:
        est = evaluate_with_draw(projects, profile, values, base_params, mode)
        e0 = profile.e0_kwh_year if profile.e0_kwh_year is not None else values["e0_kwh_year"]
        out = {
            "energy_kwh": est.energy_kwh,
            "carbon_kg": est.carbon_kg,
            "money_gbp": est.money_gbp,
            "cost_gbp": est.cost_gbp,
            "pct_energy": 100.0 * est.energy_kwh / e0,
            "pct_co2": 100.0 * est.carbon_kg / values["co2_kg_year"],
        }
        # Draws with non-positive money savings have no payback horizon; the
        # roi summary's n counts only the recoverable draws.
        if est.money_gbp > 0 and est.cost_gbp > 0:
            out["roi_years"] = est.roi_years
        for name, part in est.parts.items():
            out[f"{name}:energy_kwh"] = part.energy_kwh
            out[f"{name}:carbon_kg"] = part.carbon_kg
            out[f"{name}:money_gbp"] = part.money_gbp
            out[f"{name}:cost_gbp"] = part.cost_gbp
        return out

    return run


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    projects: tuple
    central: SavingsEstimate
    central_pct_energy: float
    central_pct_co2: float
    mc: McResult

    def summary(self, column: str) -> McSummary:
        return self.mc[column]


def central_values(priors: PriorSet) -> dict:
    return {name: priors.get(name).mean for name in priors.names()}


def scenario_report(scenario: str, priors: PriorSet = DEFAULT_PRIORS,
                    n: int = 1000, seed: int = 0,
                    profile: DwellingProfile = BARE_HOUSE,
                    base_params: ParamSet = DEFAULT_PARAMS,
                    clamp_nonnegative: bool = False,
                    projects: Optional[Sequence[str]] = None) -> ScenarioReport:
    """Monte-Carlo block for one named scenario (or an explicit project
    list): savings in kWh / kgCO2 / GBP, cost, ROI, and percentage
    reductions relative to demand and to annual emissions."""
    key = scenario.upper()
    if projects is None:
        if key not in SCENARIO_PROJECTS:
            raise ValueError(f"unknown scenario {scenario!r}; expected one of {sorted(SCENARIO_PROJECTS)}")
        projects = SCENARIO_PROJECTS[key]
    projects = tuple(projects)

    centre = central_values(priors)
    if projects:
        central = evaluate_with_draw(projects, profile, centre, base_params)
        mc = propagate(evaluation_columns(projects, profile, base_params),
                       priors=priors, n=n, seed=seed, clamp_nonnegative=clamp_nonnegative)
    else:
        central = engine.combine([])
        mc = propagate(lambda values: {"energy_kwh": 0.0, "carbon_kg": 0.0, "money_gbp": 0.0,
                                       "cost_gbp": 0.0, "roi_years": 0.0,
                                       "pct_energy": 0.0, "pct_co2": 0.0},
                       priors=priors, n=n, seed=seed)
    e0_central = profile.e0_kwh_year if profile.e0_kwh_year is not None else centre["e0_kwh_year"]
    return ScenarioReport(
        scenario=key if projects else "",
        projects=projects,
        central=central,
        central_pct_energy=100.0 * central.energy_kwh / e0_central,
        central_pct_co2=100.0 * central.carbon_kg / centre["co2_kg_year"],
        mc=mc,
    )


MC_TABLE_ROWS = ("n", "mean", "std", "min", "q25", "q50", "q75", "max")
_ROW_LABELS = {"n": "Sample Size", "q25": "25%", "q50": "50%", "q75": "75%",
               "mean": "Mean", "std": "Std", "min": "Min", "max": "Max"}


def render_mc_table(summaries: Mapping[str, McSummary], columns: Sequence[str],
                    headers: Optional[Mapping[str, str]] = None) -> str:
    """Fixed-layout text table, one row per sample statistic."""
    headers = headers or {}
    width = 22
    lines = ["".join([f"{'':<12}"] + [f"{headers.get(c, c):>{width}}" for c in columns])]
    for row in MC_TABLE_ROWS:
        cells = []
        for c in columns:
            value = getattr(summaries[c], row)
            cells.append(f"{value:>{width}d}" if row == "n" else f"{value:>{width}.2f}")
        lines.append("".join([f"{_ROW_LABELS[row]:<12}"] + cells))
    return "\n".join(lines)


def mc_table_csv(summaries: Mapping[str, McSummary], columns: Sequence[str]) -> str:
    lines = ["statistic," + ",".join(columns)]
    for row in MC_TABLE_ROWS:
        cells = [_ROW_LABELS[row]]
        for c in columns:
            value = getattr(summaries[c], row)
            cells.append(str(value) if row == "n" else f"{value:.2f}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
