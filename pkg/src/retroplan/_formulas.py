"""Pure-Python scalar kernels for the savings formulas.

These are the hot functions: Monte-Carlo propagation calls them once per
draw and stock runs once per dwelling. A compiled twin lives in
``_formulas_c.pyx``; both must stay numerically identical (see
tests/test_formula_backends.py). Keep this module free of package imports
so either backend can load in isolation.
"""

BACKEND = "python"


def insulated_conductance(li_m: float, kappa_i: float, kr_over_lr: float) -> float:
    """Heat transfer coefficient, W/(m2 K), of the roof with ``li_m`` metres
    of insulant layered under it. li_m = 0 returns the bare-roof value."""
    if li_m <= 0.0:
        return kr_over_lr
    return kappa_i / (kappa_i / kr_over_lr + li_m)


def insulation_depth_fraction(li_m: float, kappa_i: float, kr_over_lr: float) -> float:
    """Fraction of the bare-roof heat loss removed by ``li_m`` metres of
    insulant; rises from 0 toward 1 with depth."""
    if li_m <= 0.0:
        return 0.0
    return li_m / (kappa_i / kr_over_lr + li_m)


def insulation_savings_area(area_m2: float, li_to_m: float, li_from_m: float,
                            kappa_i: float, kr_over_lr: float,
                            delta_t: float, hours_factor: float) -> float:
    """kWh/yr saved by deepening loft insulation from li_from_m to li_to_m
    over ``area_m2`` of roof at temperature difference ``delta_t``."""
    g_from = insulated_conductance(li_from_m, kappa_i, kr_over_lr)
    g_to = insulated_conductance(li_to_m, kappa_i, kr_over_lr)
    return hours_factor * (g_from - g_to) * delta_t * area_m2


def insulation_savings_fraction(e0: float, li_to_m: float, li_from_m: float,
                                alpha_insulation: float,
                                kappa_i: float, kr_over_lr: float) -> float:
    """kWh/yr saved by the same upgrade, anchored to the bare-home demand
    ``e0`` instead of roof geometry."""
    f_to = insulation_depth_fraction(li_to_m, kappa_i, kr_over_lr)
    f_from = insulation_depth_fraction(li_from_m, kappa_i, kr_over_lr)
    return alpha_insulation * e0 * (f_to - f_from)


def windows_savings_area(area_m2: float, u_from: float, u_to: float,
                         delta_t: float, hours_factor: float) -> float:
    """kWh/yr saved by replacing ``area_m2`` of glazing at transmittance
    u_from with glazing at u_to."""
    return hours_factor * (u_from - u_to) * delta_t * area_m2


def windows_savings_fraction(e0: float, glazed_fraction: float,
                             alpha_windows: float,
                             u_from: float, u_to: float, u_single: float) -> float:
    """kWh/yr saved by upgrading the remaining ``1 - glazed_fraction`` of
    window area from u_from to u_to, anchored to e0. ``u_single`` normalises
    the transmittance drop against the bare (single-glazed) reference."""
    return (1.0 - glazed_fraction) * alpha_windows * e0 * (u_from - u_to) / u_single


def triple_route_savings_fraction(e0: float, glazed_fraction: float,
                                  alpha_windows: float,
                                  u_double: float, u_triple: float,
                                  u_single: float) -> float:
    """kWh/yr saved by upgrading the already multi-glazed share from double
    to triple glazing, anchored to e0."""
    return glazed_fraction * alpha_windows * e0 * (u_double - u_triple) / u_single


def windows_area_estimate(e0: float, glazed_fraction: float, alpha_windows: float,
                          u_single: float, delta_t_ref: float,
                          hours_factor: float) -> float:
    """m2 of remaining single-glazed window area implied by the bare-home
    window share of demand at reference conditions."""
    return (1.0 - glazed_fraction) * alpha_windows * e0 / (hours_factor * u_single * delta_t_ref)


def lighting_savings(e0: float, led_fraction: float,
                     alpha_lighting: float, led_power_ratio: float) -> float:
    """kWh/yr saved by replacing every remaining incandescent bulb with LED."""
    return alpha_lighting * (1.0 - led_power_ratio) * (1.0 - led_fraction) * e0


def heating_budget(e0: float, alpha_heating: float,
                   prior_windows: float, prior_insulation: float) -> float:
    """Heating demand, kWh/yr, remaining after prior fabric upgrades."""
    return alpha_heating * e0 - prior_windows - prior_insulation


def heat_pump_savings(e0: float, alpha_heating: float, hp_electricity_fraction: float,
                      prior_windows: float, prior_insulation: float) -> float:
    """kWh/yr saved by a heat pump serving the residual heating demand."""
    budget = heating_budget(e0, alpha_heating, prior_windows, prior_insulation)
    return (1.0 - hp_electricity_fraction) * budget


def heat_pump_carbon_savings(e0: float, alpha_heating: float, hp_electricity_fraction: float,
                             prior_windows: float, prior_insulation: float,
                             co2_fuel_t0: float, co2_grid: float) -> float:
    """kgCO2/yr saved by a heat pump: displaced fuel minus grid electricity drawn."""
    budget = heating_budget(e0, alpha_heating, prior_windows, prior_insulation)
    return (co2_fuel_t0 - hp_electricity_fraction * co2_grid) * budget


def heat_pump_money_savings(e0: float, alpha_heating: float, hp_electricity_fraction: float,
                            prior_windows: float, prior_insulation: float,
                            gbp_fuel_t0: float, gbp_elec: float) -> float:
    """GBP/yr saved by a heat pump; negative when electricity outprices the
    displaced fuel."""
    budget = heating_budget(e0, alpha_heating, prior_windows, prior_insulation)
    return (gbp_fuel_t0 - hp_electricity_fraction * gbp_elec) * budget


def rescale_bracket(glazed_fraction: float, led_fraction: float, loft_m: float,
                    alpha_windows: float, alpha_lighting: float, alpha_insulation: float,
                    led_power_ratio: float, u_single: float, u_double: float,
                    kappa_i: float, kr_over_lr: float, include_insulation: bool) -> float:
    """Demand multiplier (< 1) that the stock-average presence of upgrades
    applies to a bare home; its reciprocal restores the bare reference."""
    value = 1.0
    value -= alpha_windows * glazed_fraction * (u_single - u_double) / u_single
    value -= alpha_lighting * (1.0 - led_power_ratio) * led_fraction
    if include_insulation:
        value -= alpha_insulation * insulation_depth_fraction(loft_m, kappa_i, kr_over_lr)
    return value
