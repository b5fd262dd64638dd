# cython: language_level=3, cdivision=True, boundscheck=False, wraparound=False
"""Compiled twin of _formulas.py. Same functions, same semantics; any
change here must be mirrored there (tests compare the two backends)."""

BACKEND = "cython"


cpdef double insulated_conductance(double li_m, double kappa_i, double kr_over_lr):
    if li_m <= 0.0:
        return kr_over_lr
    return kappa_i / (kappa_i / kr_over_lr + li_m)


cpdef double insulation_depth_fraction(double li_m, double kappa_i, double kr_over_lr):
    if li_m <= 0.0:
        return 0.0
    return li_m / (kappa_i / kr_over_lr + li_m)


cpdef double insulation_savings_area(double area_m2, double li_to_m, double li_from_m,
                                     double kappa_i, double kr_over_lr,
                                     double delta_t, double hours_factor):
    cdef double g_from = insulated_conductance(li_from_m, kappa_i, kr_over_lr)
    cdef double g_to = insulated_conductance(li_to_m, kappa_i, kr_over_lr)
    return hours_factor * (g_from - g_to) * delta_t * area_m2


cpdef double insulation_savings_fraction(double e0, double li_to_m, double li_from_m,
                                         double alpha_insulation,
                                         double kappa_i, double kr_over_lr):
    cdef double f_to = insulation_depth_fraction(li_to_m, kappa_i, kr_over_lr)
    cdef double f_from = insulation_depth_fraction(li_from_m, kappa_i, kr_over_lr)
    return alpha_insulation * e0 * (f_to - f_from)


cpdef double windows_savings_area(double area_m2, double u_from, double u_to,
                                  double delta_t, double hours_factor):
    return hours_factor * (u_from - u_to) * delta_t * area_m2


cpdef double windows_savings_fraction(double e0, double glazed_fraction,
                                      double alpha_windows,
                                      double u_from, double u_to, double u_single):
    return (1.0 - glazed_fraction) * alpha_windows * e0 * (u_from - u_to) / u_single


cpdef double triple_route_savings_fraction(double e0, double glazed_fraction,
                                           double alpha_windows,
                                           double u_double, double u_triple,
                                           double u_single):
    return glazed_fraction * alpha_windows * e0 * (u_double - u_triple) / u_single


cpdef double windows_area_estimate(double e0, double glazed_fraction, double alpha_windows,
                                   double u_single, double delta_t_ref,
                                   double hours_factor):
    return (1.0 - glazed_fraction) * alpha_windows * e0 / (hours_factor * u_single * delta_t_ref)


cpdef double lighting_savings(double e0, double led_fraction,
                              double alpha_lighting, double led_power_ratio):
    return alpha_lighting * (1.0 - led_power_ratio) * (1.0 - led_fraction) * e0


cpdef double heating_budget(double e0, double alpha_heating,
                            double prior_windows, double prior_insulation):
    return alpha_heating * e0 - prior_windows - prior_insulation


cpdef double heat_pump_savings(double e0, double alpha_heating, double hp_electricity_fraction,
                               double prior_windows, double prior_insulation):
    cdef double budget = heating_budget(e0, alpha_heating, prior_windows, prior_insulation)
    return (1.0 - hp_electricity_fraction) * budget


cpdef double heat_pump_carbon_savings(double e0, double alpha_heating, double hp_electricity_fraction,
                                      double prior_windows, double prior_insulation,
                                      double co2_fuel_t0, double co2_grid):
    cdef double budget = heating_budget(e0, alpha_heating, prior_windows, prior_insulation)
    return (co2_fuel_t0 - hp_electricity_fraction * co2_grid) * budget


cpdef double heat_pump_money_savings(double e0, double alpha_heating, double hp_electricity_fraction,
                                     double prior_windows, double prior_insulation,
                                     double gbp_fuel_t0, double gbp_elec):
    cdef double budget = heating_budget(e0, alpha_heating, prior_windows, prior_insulation)
    return (gbp_fuel_t0 - hp_electricity_fraction * gbp_elec) * budget


cpdef double rescale_bracket(double glazed_fraction, double led_fraction, double loft_m,
                             double alpha_windows, double alpha_lighting, double alpha_insulation,
                             double led_power_ratio, double u_single, double u_double,
                             double kappa_i, double kr_over_lr, bint include_insulation):
    cdef double value = 1.0
    value -= alpha_windows * glazed_fraction * (u_single - u_double) / u_single
    value -= alpha_lighting * (1.0 - led_power_ratio) * led_fraction
    if include_insulation:
        value -= alpha_insulation * insulation_depth_fraction(loft_m, kappa_i, kr_over_lr)
    return value
