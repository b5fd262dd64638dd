"""retroplan: retrofit savings analytics for individual dwellings and
whole housing stocks.

Estimates energy, CO2, and money savings (plus cost and payback) for four
upgrade projects - loft insulation, multi-glazed windows, LED lighting, and
heat pumps - against a regression-derived bare-home baseline, with seeded
Monte-Carlo uncertainty propagation.
"""

__version__ = "0.1.0"

from .engine import (Channel, Dwelling, EvalMode, GlazingRoute, HeatPumpPlan, LightingPlan,
                     LoftPlan, ProjectEstimate, SavingsEstimate, WindowsPlan, compose,
                     glazing_plan)
from .formulas import BACKEND as FORMULA_BACKEND
from .params import (ConversionFactors, CostModel, DEFAULT_PARAMS, FractionParams, ParamSet,
                     ThermalParams, load_params)
from .records import AgeBand, BuiltForm, DwellingRecord, Fuel, PropertyType
from .regression import (BareHomeModel, Basis, CvReport, DesignSpec, RegressionFit,
                         RescaleParams, cross_validate, encode, fit_ols, load_model,
                         predict_ebar, rescale_to_bare, save_model)
from .uncertainty import (DwellingProfile, McSummary, PriorSet, UncertainParam, propagate,
                          scenario_report)

__all__ = [
    "AgeBand", "BareHomeModel", "Basis", "BuiltForm", "Channel", "ConversionFactors",
    "CostModel", "CvReport", "DEFAULT_PARAMS", "DesignSpec", "Dwelling", "DwellingProfile",
    "DwellingRecord", "EvalMode", "FORMULA_BACKEND", "FractionParams", "Fuel", "GlazingRoute",
    "HeatPumpPlan", "LightingPlan", "LoftPlan", "McSummary", "ParamSet", "PriorSet",
    "ProjectEstimate", "PropertyType", "RegressionFit", "RescaleParams", "SavingsEstimate",
    "ThermalParams", "UncertainParam", "WindowsPlan", "compose", "cross_validate", "encode",
    "fit_ols", "glazing_plan", "load_model", "load_params", "predict_ebar", "propagate",
    "rescale_to_bare", "save_model", "scenario_report",
]
