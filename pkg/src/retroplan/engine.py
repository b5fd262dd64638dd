"""Closed-form savings, cost, carbon, and money for the four retrofit
projects, plus the rules for composing them on one dwelling.

Two evaluation modes exist for the thermal projects and are always explicit
in the plan, never inferred:

* fraction mode anchors savings to the bare-home annual demand ``e0`` and
  needs no geometry;
* area mode works from roof / window area and the temperature difference.

Heat pumps are evaluated last: their savings apply to the heating demand
left over after window and insulation upgrades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

from . import formulas as fml
from .errors import EligibilityError, HeatingBudgetError
from .params import ParamSet, DEFAULT_PARAMS
from .records import Fuel, PropertyType

LOFT = "loft"
WINDOWS = "windows"
LIGHTING = "lighting"
HEAT_PUMP = "heat_pump"

PROJECTS = (LOFT, WINDOWS, LIGHTING, HEAT_PUMP)
HOUSE_ONLY_PROJECTS = frozenset({LOFT, HEAT_PUMP})

# Evaluation order: fabric first, lighting is independent, heat pump last.
_EVAL_ORDER = {WINDOWS: 0, LOFT: 1, LIGHTING: 2, HEAT_PUMP: 3}


class EvalMode(Enum):
    FRACTION = "fraction"
    AREA = "area"


class GlazingRoute(Enum):
    AUTO = "auto"
    SINGLES_TO_DOUBLE = "double"
    DOUBLES_TO_TRIPLE = "triple"


class Channel(Enum):
    """Which conversion factor a kWh saving is priced/weighed with."""

    HEATING = "heating"
    LIGHTING = "lighting"


@dataclass(frozen=True)
class Dwelling:
    """Inputs the engine needs about one dwelling."""

    e0_kwh_year: float
    property_type: PropertyType = PropertyType.HOUSE
    fuel: Fuel = Fuel.GAS
    floor_area: float = 109.0

    def __post_init__(self):
        if self.e0_kwh_year <= 0:
            raise ValueError("e0_kwh_year must be positive")
        if self.floor_area <= 0:
            raise ValueError("floor_area must be positive")


@dataclass(frozen=True)
class LoftPlan:
    target_cm: float = 15.0
    current_cm: float = 0.0
    mode: EvalMode = EvalMode.FRACTION
    area_m2: Optional[float] = None  # None: use the dwelling floor area

    project = LOFT


@dataclass(frozen=True)
class WindowsPlan:
    glazed_fraction: float = 0.0
    route: GlazingRoute = GlazingRoute.AUTO
    mode: EvalMode = EvalMode.FRACTION
    area_m2: Optional[float] = None  # None: back-estimate from e0 at reference conditions

    project = WINDOWS


@dataclass(frozen=True)
class LightingPlan:
    led_fraction: float = 0.0
    n_bulbs: int = 12
    # Bulb power and on-time cancel out of the savings; carried for reporting.
    bulb_power_w: Optional[float] = None
    hours_on_per_year: Optional[float] = None

    project = LIGHTING


@dataclass(frozen=True)
class HeatPumpPlan:
    project = HEAT_PUMP


ProjectPlan = Union[LoftPlan, WindowsPlan, LightingPlan, HeatPumpPlan]


@dataclass(frozen=True)
class ProjectEstimate:
    project: str
    energy_kwh: float
    carbon_kg: float
    money_gbp: float
    cost_gbp: float
    flags: tuple = ()

    @property
    def roi_years(self) -> float:
        return self.cost_gbp / self.money_gbp if self.money_gbp > 0 else math.inf


@dataclass(frozen=True)
class SavingsEstimate:
    energy_kwh: float
    carbon_kg: float
    money_gbp: float
    cost_gbp: float
    roi_years: float  # inf flags a non-recoverable investment
    parts: dict = field(default_factory=dict)
    flags: tuple = ()


def carbon_savings(kwh: float, channel: Channel, conversions, fuel: Fuel = Fuel.GAS) -> float:
    """kgCO2/yr for a kWh saving: heating savings carry the dwelling fuel's
    factor, lighting savings the grid factor."""
    if kwh < 0:
        raise ValueError("kwh must be non-negative")
    factor = conversions.co2(fuel) if channel is Channel.HEATING else conversions.co2_grid
    return factor * kwh


def money_savings(kwh: float, channel: Channel, conversions, fuel: Fuel = Fuel.GAS) -> float:
    """GBP/yr for a kWh saving, priced by the displaced energy source."""
    if kwh < 0:
        raise ValueError("kwh must be non-negative")
    tariff = conversions.gbp(fuel) if channel is Channel.HEATING else conversions.gbp_elec
    return tariff * kwh


def insulation_savings_area(area_m2: float, li_target_m: float, li_current_m: float,
                            params: ParamSet = DEFAULT_PARAMS,
                            delta_t: Optional[float] = None) -> float:
    """kWh/yr from deepening loft insulation over a known roof area."""
    _check_depths(li_target_m, li_current_m)
    if area_m2 <= 0:
        raise ValueError("area_m2 must be positive")
    t = params.thermal
    return fml.insulation_savings_area(area_m2, li_target_m, li_current_m,
                                       t.kappa_i, t.kr_over_lr,
                                       t.delta_t if delta_t is None else delta_t,
                                       t.hours_factor)


def insulation_savings_fraction(e0: float, li_target_m: float, li_current_m: float,
                                params: ParamSet = DEFAULT_PARAMS) -> float:
    """kWh/yr from the same upgrade, anchored to bare-home demand."""
    _check_depths(li_target_m, li_current_m)
    if e0 <= 0:
        raise ValueError("e0 must be positive")
    t = params.thermal
    return fml.insulation_savings_fraction(e0, li_target_m, li_current_m,
                                           params.fractions.alpha_insulation,
                                           t.kappa_i, t.kr_over_lr)


def _check_depths(li_target_m: float, li_current_m: float) -> None:
    if li_current_m < 0:
        raise ValueError("current insulation depth cannot be negative")
    if li_target_m < li_current_m:
        raise ValueError("removing insulation is not modelled (target < current)")


def windows_savings_fraction(e0: float, glazed_fraction: float,
                             params: ParamSet = DEFAULT_PARAMS) -> float:
    """kWh/yr from double-glazing the remaining single-glazed share."""
    _check_glazed(glazed_fraction)
    if e0 <= 0:
        raise ValueError("e0 must be positive")
    t = params.thermal
    return fml.windows_savings_fraction(e0, glazed_fraction, params.fractions.alpha_windows,
                                        t.u_single, t.u_double, t.u_single)


def windows_area_estimate(e0: float, glazed_fraction: float,
                          params: ParamSet = DEFAULT_PARAMS) -> float:
    """m2 of remaining single-glazed area implied by e0.

    Always evaluated at the fixed reference conditions ``delta_t_ref`` and
    ``u_single_ref``: the back-estimate is a calibration, decoupled from
    whatever delta_t / U-values a savings evaluation samples.
    """
    _check_glazed(glazed_fraction)
    t = params.thermal
    return fml.windows_area_estimate(e0, glazed_fraction, params.fractions.alpha_windows,
                                     t.u_single_ref, t.delta_t_ref, t.hours_factor)


def windows_savings_area(area_m2: float, u_from: float, u_to: float,
                         params: ParamSet = DEFAULT_PARAMS,
                         delta_t: Optional[float] = None) -> float:
    """kWh/yr from upgrading ``area_m2`` of glazing from u_from to u_to."""
    if u_from <= u_to:
        raise ValueError("glazing upgrade must lower the U-value (u_from > u_to)")
    if area_m2 < 0:
        raise ValueError("area_m2 must be non-negative")
    t = params.thermal
    return fml.windows_savings_area(area_m2, u_from, u_to,
                                    t.delta_t if delta_t is None else delta_t,
                                    t.hours_factor)


def _check_glazed(glazed_fraction: float) -> None:
    if not 0.0 <= glazed_fraction <= 1.0:
        raise ValueError("glazed_fraction must lie in [0,1]")


def glazing_plan(glazed_fraction: float, params: ParamSet = DEFAULT_PARAMS) -> GlazingRoute:
    """Pick the window route with the larger per-e0 savings.

    Upgrading doubles to triples wins once the already-glazed share is large
    enough that lam*(U_double - U_triple) exceeds (1-lam)*(U_single - U_double).
    """
    _check_glazed(glazed_fraction)
    t = params.thermal
    triple_gain = glazed_fraction * (t.u_double - t.u_triple)
    double_gain = (1.0 - glazed_fraction) * (t.u_single - t.u_double)
    return GlazingRoute.DOUBLES_TO_TRIPLE if triple_gain > double_gain else GlazingRoute.SINGLES_TO_DOUBLE


def lighting_savings(e0: float, plan: LightingPlan, params: ParamSet = DEFAULT_PARAMS) -> float:
    """kWh/yr from finishing the switch to LED lighting.

    Independent of bulb count, bulb power, and hours on: those cancel out of
    the before/after difference.
    """
    if e0 <= 0:
        raise ValueError("e0 must be positive")
    if not 0.0 <= plan.led_fraction <= 1.0:
        raise ValueError("led_fraction must lie in [0,1]")
    f = params.fractions
    return fml.lighting_savings(e0, plan.led_fraction, f.alpha_lighting, f.led_power_ratio)


def hp_savings(e0: float, prior_window_savings: float, prior_insulation_savings: float,
               params: ParamSet = DEFAULT_PARAMS) -> float:
    """kWh/yr from a heat pump serving the residual heating demand."""
    _check_budget(e0, prior_window_savings, prior_insulation_savings, params)
    f = params.fractions
    return fml.heat_pump_savings(e0, f.alpha_heating, f.hp_electricity_fraction,
                                 prior_window_savings, prior_insulation_savings)


def hp_carbon_savings(e0: float, prior_window_savings: float, prior_insulation_savings: float,
                      fuel_t0: Fuel, params: ParamSet = DEFAULT_PARAMS) -> float:
    """kgCO2/yr from a heat pump: fuel displaced minus grid electricity drawn."""
    _check_budget(e0, prior_window_savings, prior_insulation_savings, params)
    f, c = params.fractions, params.conversions
    return fml.heat_pump_carbon_savings(e0, f.alpha_heating, f.hp_electricity_fraction,
                                        prior_window_savings, prior_insulation_savings,
                                        c.co2(fuel_t0), c.co2_grid)


def hp_money_savings(e0: float, prior_window_savings: float, prior_insulation_savings: float,
                     fuel_t0: Fuel, params: ParamSet = DEFAULT_PARAMS) -> float:
    """GBP/yr from a heat pump; may be negative when electricity outprices
    the displaced fuel. Returned as-is, never clamped here."""
    _check_budget(e0, prior_window_savings, prior_insulation_savings, params)
    f, c = params.fractions, params.conversions
    return fml.heat_pump_money_savings(e0, f.alpha_heating, f.hp_electricity_fraction,
                                       prior_window_savings, prior_insulation_savings,
                                       c.gbp(fuel_t0), c.gbp_elec)


def _check_budget(e0, prior_windows, prior_insulation, params) -> None:
    if prior_windows < 0 or prior_insulation < 0:
        raise ValueError("prior savings cannot be negative")
    if fml.heating_budget(e0, params.fractions.alpha_heating, prior_windows, prior_insulation) < 0:
        raise HeatingBudgetError(
            f"prior savings {prior_windows + prior_insulation:.1f} kWh/yr exceed the heating "
            f"share {params.fractions.alpha_heating * e0:.1f} kWh/yr of demand")


def project_cost(project: str, params: ParamSet = DEFAULT_PARAMS, *,
                 area_m2: float = 0.0, cm_added: float = 0.0,
                 bulbs_to_replace: int = 0, floor_area: float = 0.0) -> float:
    """GBP cost of one project given its geometric inputs."""
    cm = params.costs
    if min(area_m2, cm_added, bulbs_to_replace, floor_area) < 0:
        raise ValueError("geometric cost inputs must be non-negative")
    if project == LOFT:
        if cm_added == 0.0:
            return 0.0
        return area_m2 * (cm.loft_material * cm_added + cm.loft_install)
    if project == WINDOWS:
        if area_m2 == 0.0:
            return 0.0
        return area_m2 * cm.window_material + math.ceil(area_m2 * cm.install_days_per_m2) * cm.window_day_rate
    if project == LIGHTING:
        return bulbs_to_replace * (cm.led_unit + cm.led_install_per_bulb)
    if project == HEAT_PUMP:
        return cm.hp_large_home if floor_area > cm.hp_area_threshold else cm.hp_base
    raise ValueError(f"unknown project: {project}")


def evaluate_loft(plan: LoftPlan, dwelling: Dwelling,
                  params: ParamSet = DEFAULT_PARAMS,
                  delta_t: Optional[float] = None) -> ProjectEstimate:
    target_cm = max(plan.target_cm, plan.current_cm)  # supplement only, never remove
    li_to, li_from = target_cm / 100.0, plan.current_cm / 100.0
    area = dwelling.floor_area if plan.area_m2 is None else plan.area_m2
    if plan.mode is EvalMode.AREA:
        kwh = insulation_savings_area(area, li_to, li_from, params, delta_t=delta_t)
    else:
        kwh = insulation_savings_fraction(dwelling.e0_kwh_year, li_to, li_from, params)
    cost = project_cost(LOFT, params, area_m2=area, cm_added=target_cm - plan.current_cm)
    flags = ("already_at_target",) if target_cm == plan.current_cm else ()
    return ProjectEstimate(LOFT, kwh,
                           carbon_savings(kwh, Channel.HEATING, params.conversions, dwelling.fuel),
                           money_savings(kwh, Channel.HEATING, params.conversions, dwelling.fuel),
                           cost, flags)


def evaluate_windows(plan: WindowsPlan, dwelling: Dwelling,
                     params: ParamSet = DEFAULT_PARAMS,
                     delta_t: Optional[float] = None) -> ProjectEstimate:
    if plan.route is GlazingRoute.AUTO and plan.glazed_fraction >= 1.0 and plan.area_m2 is None:
        # Fully multi-glazed already: nothing to supplement. (An explicit
        # triple-glazing route still evaluates the double-to-triple upgrade.)
        return ProjectEstimate(WINDOWS, 0.0, 0.0, 0.0, 0.0, ("already_at_target",))
    route = glazing_plan(plan.glazed_fraction, params) if plan.route is GlazingRoute.AUTO else plan.route
    t = params.thermal
    flags: list = []

    # Window area: explicit, or back-estimated at reference conditions. The
    # total is the single-glazed estimate scaled back to the full envelope.
    singles_area = windows_area_estimate(dwelling.e0_kwh_year, plan.glazed_fraction, params)
    if plan.area_m2 is not None:
        upgrade_area = plan.area_m2
    elif route is GlazingRoute.SINGLES_TO_DOUBLE:
        upgrade_area = singles_area
    else:
        total_area = windows_area_estimate(dwelling.e0_kwh_year, 0.0, params)
        upgrade_area = plan.glazed_fraction * total_area

    if route is GlazingRoute.SINGLES_TO_DOUBLE:
        u_from, u_to = t.u_single, t.u_double
        nothing_to_do = plan.glazed_fraction >= 1.0 and plan.area_m2 is None
    else:
        u_from, u_to = t.u_double, t.u_triple
        nothing_to_do = plan.glazed_fraction <= 0.0 and plan.area_m2 is None
        flags.append("triple_material_priced_as_double")

    if plan.mode is EvalMode.AREA:
        kwh = 0.0 if nothing_to_do else windows_savings_area(upgrade_area, u_from, u_to, params, delta_t=delta_t)
    elif route is GlazingRoute.SINGLES_TO_DOUBLE:
        kwh = windows_savings_fraction(dwelling.e0_kwh_year, plan.glazed_fraction, params)
    else:
        kwh = fml.triple_route_savings_fraction(dwelling.e0_kwh_year, plan.glazed_fraction,
                                                params.fractions.alpha_windows,
                                                t.u_double, t.u_triple, t.u_single)
    cost = 0.0 if nothing_to_do else project_cost(WINDOWS, params, area_m2=upgrade_area)
    return ProjectEstimate(WINDOWS, kwh,
                           carbon_savings(kwh, Channel.HEATING, params.conversions, dwelling.fuel),
                           money_savings(kwh, Channel.HEATING, params.conversions, dwelling.fuel),
                           cost, tuple(flags))


def evaluate_lighting(plan: LightingPlan, dwelling: Dwelling,
                      params: ParamSet = DEFAULT_PARAMS) -> ProjectEstimate:
    kwh = lighting_savings(dwelling.e0_kwh_year, plan, params)
    bulbs = round(plan.n_bulbs * (1.0 - plan.led_fraction))
    cost = project_cost(LIGHTING, params, bulbs_to_replace=bulbs)
    return ProjectEstimate(LIGHTING, kwh,
                           carbon_savings(kwh, Channel.LIGHTING, params.conversions),
                           money_savings(kwh, Channel.LIGHTING, params.conversions),
                           cost)


def evaluate_heat_pump(dwelling: Dwelling, prior_window_savings: float,
                       prior_insulation_savings: float,
                       params: ParamSet = DEFAULT_PARAMS) -> ProjectEstimate:
    kwh = hp_savings(dwelling.e0_kwh_year, prior_window_savings, prior_insulation_savings, params)
    carbon = hp_carbon_savings(dwelling.e0_kwh_year, prior_window_savings,
                               prior_insulation_savings, dwelling.fuel, params)
    money = hp_money_savings(dwelling.e0_kwh_year, prior_window_savings,
                             prior_insulation_savings, dwelling.fuel, params)
    cost = project_cost(HEAT_PUMP, params, floor_area=dwelling.floor_area)
    flags = []
    if money < 0:
        flags.append("negative_money_savings")
    if dwelling.floor_area > params.costs.hp_area_threshold:
        flags.append("large_home_rate")
    return ProjectEstimate(HEAT_PUMP, kwh, carbon, money, cost, tuple(flags))


def combine(parts: Sequence[ProjectEstimate]) -> SavingsEstimate:
    """Sum per-project estimates into one dwelling-level estimate.

    Callers are responsible for the heat-pump ordering rule (its part must
    have been evaluated against the post-fabric heating budget); totals are
    plain sums and ROI is total cost over total annual money savings.
    """
    energy = sum(p.energy_kwh for p in parts)
    carbon = sum(p.carbon_kg for p in parts)
    money = sum(p.money_gbp for p in parts)
    cost = sum(p.cost_gbp for p in parts)
    flags = tuple(f for p in parts for f in p.flags)
    if cost == 0.0:
        roi = 0.0
    elif money > 0:
        roi = cost / money
    else:
        roi = math.inf
        flags = flags + ("non_recoverable",)
    return SavingsEstimate(energy, carbon, money, cost, roi,
                           parts={p.project: p for p in parts}, flags=flags)


def check_eligibility(projects: Sequence[str], property_type: PropertyType) -> None:
    requested = [getattr(p, "project", p) for p in projects]
    if len(set(requested)) != len(requested):
        raise ValueError("at most one plan per project type")
    if property_type is not PropertyType.HOUSE:
        blocked = sorted(set(requested) & HOUSE_ONLY_PROJECTS)
        if blocked:
            raise EligibilityError(
                f"{', '.join(blocked)} only applies to houses, not {property_type.value}")


def compose(plans: Sequence[ProjectPlan], dwelling: Dwelling,
            params: ParamSet = DEFAULT_PARAMS,
            delta_t: Optional[float] = None) -> SavingsEstimate:
    """Evaluate a set of project plans on one dwelling.

    Windows and insulation are evaluated first, lighting independently, and
    the heat pump last against the heating budget the fabric upgrades leave
    behind. An empty plan set composes to the all-zero estimate.
    """
    check_eligibility(plans, dwelling.property_type)
    ordered = sorted(plans, key=lambda p: _EVAL_ORDER[p.project])
    parts: list[ProjectEstimate] = []
    prior_windows = prior_insulation = 0.0
    for plan in ordered:
        if isinstance(plan, WindowsPlan):
            est = evaluate_windows(plan, dwelling, params, delta_t=delta_t)
            prior_windows = est.energy_kwh
        elif isinstance(plan, LoftPlan):
            est = evaluate_loft(plan, dwelling, params, delta_t=delta_t)
            prior_insulation = est.energy_kwh
        elif isinstance(plan, LightingPlan):
            est = evaluate_lighting(plan, dwelling, params)
        elif isinstance(plan, HeatPumpPlan):
            est = evaluate_heat_pump(dwelling, prior_windows, prior_insulation, params)
        else:
            raise TypeError(f"unknown plan type: {type(plan).__name__}")
        parts.append(est)
    return combine(parts)
