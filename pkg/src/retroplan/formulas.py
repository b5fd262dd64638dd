"""Formula backend selection.

Imports the compiled core when the extension was built, otherwise the pure
Python twin. ``RETROPLAN_PURE_PYTHON=1`` forces the fallback (used by the
benchmark and by tests that compare the two backends).
"""

import os

if os.environ.get("RETROPLAN_PURE_PYTHON") == "1":
    from . import _formulas as _impl
else:
    try:
        from . import _formulas_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _formulas as _impl

BACKEND = _impl.BACKEND

insulated_conductance = _impl.insulated_conductance
insulation_depth_fraction = _impl.insulation_depth_fraction
insulation_savings_area = _impl.insulation_savings_area
insulation_savings_fraction = _impl.insulation_savings_fraction
windows_savings_area = _impl.windows_savings_area
windows_savings_fraction = _impl.windows_savings_fraction
triple_route_savings_fraction = _impl.triple_route_savings_fraction
windows_area_estimate = _impl.windows_area_estimate
lighting_savings = _impl.lighting_savings
heating_budget = _impl.heating_budget
heat_pump_savings = _impl.heat_pump_savings
heat_pump_carbon_savings = _impl.heat_pump_carbon_savings
heat_pump_money_savings = _impl.heat_pump_money_savings
rescale_bracket = _impl.rescale_bracket
