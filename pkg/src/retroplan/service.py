"""Stateless HTTP JSON facade over a loaded baseline model.

One immutable model snapshot serves every request; estimate requests are
pure functions of (body, model, params), with Monte-Carlo paths seeded from
the request. Portfolio outputs, when mounted, are read-only files produced
by the CLI.

Error contract: 400 for schema violations (with the field path), 422 for
domain violations such as requesting a loft upgrade for a flat.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import engine
from .engine import EvalMode, GlazingRoute
from .errors import EligibilityError
from .params import DEFAULT_PARAMS, ParamSet, params_to_dict
from .records import DwellingRecord, Fuel, parse_age_band, parse_built_form, parse_property_type
from .regression import (BareHomeModel, model_to_dict, MONTHS_PER_YEAR, encode, group_for,
                         predict_ebar, rescale_to_bare)
from .uncertainty import (DEFAULT_PRIORS, DwellingProfile, UncertainParam,
                          evaluate_with_draw, evaluation_columns, propagate)

UNITS = {"energy_kwh": "kWh/yr", "carbon_kg": "kgCO2/yr", "money_gbp": "GBP/yr",
         "cost_gbp": "GBP", "roi_years": "years", "pct_energy": "%", "pct_co2": "%"}


class DwellingIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    property_type: str = Field(description="House, Flat, Bungalow, Maisonette, or Park Home")
    built_form: str = "Detached"
    age_band: str = "pre1900"
    floor_area: float = Field(gt=10.0, description="m2; must exceed 10")
    floor_height: Optional[float] = Field(default=None, gt=0)
    glazed_fraction: float = Field(default=0.0, ge=0.0, le=1.0)
    led_fraction: float = Field(default=0.0, ge=0.0, le=1.0)
    loft_cm: float = Field(default=0.0, ge=0.0)
    fuel: str = "Gas"


class ProjectTogglesIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    loft: bool = False
    windows: bool = False
    lighting: bool = False
    heat_pump: bool = False


class TargetsIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    loft_cm: float = Field(default=15.0, ge=0.0)
    glazing_route: str = Field(default="auto", pattern="^(auto|double|triple)$")


class McIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(default=1000, ge=2, le=100000)
    seed: int = 0


class OverridesIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    e0_kwh_year: Optional[float] = Field(default=None, gt=0.0,
                                         description="Bare annual demand; skips the model prediction")
    e0_std: Optional[float] = Field(default=None, ge=0.0)
    delta_t: Optional[float] = Field(default=None, gt=0.0)
    gas_tariff: Optional[float] = Field(default=None, gt=0.0)
    elec_tariff: Optional[float] = Field(default=None, gt=0.0)


class EstimateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dwelling: DwellingIn
    projects: ProjectTogglesIn
    targets: TargetsIn = TargetsIn()
    mode: str = Field(default="area", pattern="^(area|fraction)$",
                      description="Thermal projects from geometry (area) or anchored to e0 (fraction)")
    mc: Optional[McIn] = None
    overrides: OverridesIn = OverridesIn()


class QuantityOut(BaseModel):
    value: float
    units: str


class PartOut(BaseModel):
    project: str
    energy_kwh: float
    carbon_kg: float
    money_gbp: float
    cost_gbp: float
    flags: list[str]


class McSummaryOut(BaseModel):
    n: int
    mean: float
    std: float
    min: float
    q25: float
    q50: float
    q75: float
    max: float
    units: str


class EstimateResponse(BaseModel):
    e0_kwh_year: QuantityOut
    e0_std_kwh_year: QuantityOut
    energy_kwh: QuantityOut
    carbon_kg: QuantityOut
    money_gbp: QuantityOut
    cost_gbp: QuantityOut
    roi_years: Optional[QuantityOut]
    pct_energy: QuantityOut
    pct_co2: QuantityOut
    parts: list[PartOut]
    mc: Optional[dict[str, McSummaryOut]]
    warnings: list[str]
    profile_hash: str
    model_version: str


def _profile_hash(params: ParamSet, model: BareHomeModel) -> str:
    payload = json.dumps({"params": params_to_dict(params),
                          "model": model_to_dict(model)["checksum"]}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _prediction_std_annual(model: BareHomeModel, record, factor: float) -> float:
    """Approximate annual std of the bare prediction from the per-coefficient
    standard errors (diagonal covariance only; documented approximation)."""
    x = encode(record, model.fit.spec)
    se = model.fit.stderr
    var = se[0] ** 2 + float(((x * se[1:]) ** 2).sum())
    return (var ** 0.5) * factor * MONTHS_PER_YEAR


def create_app(model: BareHomeModel, params: ParamSet = DEFAULT_PARAMS,
               portfolio_dir: Optional[Path] = None,
               cors_origin: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="retroplan", version="0.1.0", docs_url="/docs")

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                           allow_methods=["*"], allow_headers=["*"])

    model_payload = model_to_dict(model)
    profile_hash = _profile_hash(params, model)

    @app.exception_handler(RequestValidationError)
    async def schema_error(request: Request, exc: RequestValidationError):
        details = [{"field": ".".join(str(p) for p in e["loc"]), "message": e["msg"]}
                   for e in exc.errors()]
        return JSONResponse(status_code=400, content={"error": "schema violation",
                                                      "details": details})

    @app.get("/health")
    def health():
        return {"status": "ok", "model_version": model_payload["model_version"]}

    @app.get("/model")
    def model_view():
        return model_payload

    @app.post("/estimate", response_model=EstimateResponse, response_model_exclude_none=False)
    def estimate(req: EstimateRequest):
        try:
            return _estimate(req)
        except EligibilityError as exc:
            return JSONResponse(status_code=422, content={"error": "domain violation",
                                                          "detail": str(exc)})
        except ValueError as exc:
            return JSONResponse(status_code=422, content={"error": "domain violation",
                                                          "detail": str(exc)})

    def _estimate(req: EstimateRequest) -> EstimateResponse:
        d = req.dwelling
        property_type = parse_property_type(d.property_type)
        built_form = parse_built_form(d.built_form)
        age_band = parse_age_band(d.age_band)
        fuel = Fuel(d.fuel.title())

        projects = [name for name, on in (
            (engine.LOFT, req.projects.loft), (engine.WINDOWS, req.projects.windows),
            (engine.LIGHTING, req.projects.lighting), (engine.HEAT_PUMP, req.projects.heat_pump),
        ) if on]
        engine.check_eligibility(projects, property_type)

        warnings = [f"calibrated default in play: {name}" for name in type(params.costs).CALIBRATED]
        run_params = params  # per-draw values supersede the matching sections

        # Bare annual demand: explicit override, or model prediction rescaled.
        if req.overrides.e0_kwh_year is not None:
            e0 = req.overrides.e0_kwh_year
            e0_std = req.overrides.e0_std or 0.0
        else:
            height = d.floor_height
            if height is None or not 1.0 <= height <= 10.0:
                height = model.height_means.get(property_type.value, 2.5)
            record = DwellingRecord(
                id="request", borough="Westminster", property_type=property_type,
                built_form=built_form, age_band=age_band, floor_area=d.floor_area,
                annual_consumption=1.0, multi_glaze_proportion=d.glazed_fraction,
                low_energy_lighting=d.led_fraction, loft_insulation_cm=d.loft_cm,
                main_fuel=fuel, has_heat_pump=False, floor_height=height,
                volume=d.floor_area * height)
            ebar = predict_ebar(model.fit, record)
            group = group_for(property_type)
            e0_month, factor = rescale_to_bare(ebar, group, model.rescale)
            e0 = e0_month * MONTHS_PER_YEAR
            e0_std = _prediction_std_annual(model, record, factor)
            if ebar == 0.0:
                warnings.append("negative prediction clamped to zero")
        if e0 <= 0:
            raise ValueError("bare demand is zero; nothing to estimate against")

        profile = DwellingProfile(
            property_type=property_type, built_form=built_form, age_band=age_band,
            fuel=fuel, floor_area=d.floor_area, glazed_fraction=d.glazed_fraction,
            led_fraction=d.led_fraction, loft_current_cm=d.loft_cm,
            loft_target_cm=max(req.targets.loft_cm, d.loft_cm),
            glazing_route=GlazingRoute(req.targets.glazing_route),
            e0_kwh_year=e0)
        mode = EvalMode(req.mode)

        # Priors for this request: the dwelling's own bare demand, tariff or
        # temperature overrides shifting the matching prior's centre.
        priors = DEFAULT_PRIORS.replace(e0_kwh_year=UncertainParam(e0, e0_std, units="kWh/yr"))
        if req.overrides.gas_tariff is not None:
            priors = priors.replace(gas_tariff=UncertainParam(
                req.overrides.gas_tariff, priors.gas_tariff.std, units="GBP/kWh"))
        if req.overrides.elec_tariff is not None:
            priors = priors.replace(elec_tariff=UncertainParam(
                req.overrides.elec_tariff, priors.elec_tariff.std, units="GBP/kWh"))
        if req.overrides.delta_t is not None:
            priors = priors.replace(external_temp_c=UncertainParam(
                priors.setpoint_c.mean - req.overrides.delta_t,
                priors.external_temp_c.std, units="C"))

        central_values = {name: priors.get(name).mean for name in priors.names()}

        if projects:
            est = evaluate_with_draw(projects, profile, central_values, run_params, mode=mode)
        else:
            est = engine.combine([])

        mc_out = None
        if req.mc is not None and projects:
            result = propagate(evaluation_columns(projects, profile, run_params, mode=mode),
                               priors=priors, n=req.mc.n, seed=req.mc.seed)
            mc_out = {key: McSummaryOut(units=UNITS.get(key.split(":")[-1], ""),
                                        **summary.to_dict())
                      for key, summary in result.summaries.items()}

        if any("negative_money_savings" in p.flags for p in est.parts.values()):
            warnings.append("heat-pump money savings are negative at current tariffs")

        def q(value, key):
            return QuantityOut(value=value, units=UNITS[key])

        return EstimateResponse(
            e0_kwh_year=q(e0, "energy_kwh"), e0_std_kwh_year=q(e0_std, "energy_kwh"),
            energy_kwh=q(est.energy_kwh, "energy_kwh"),
            carbon_kg=q(est.carbon_kg, "carbon_kg"),
            money_gbp=q(est.money_gbp, "money_gbp"),
            cost_gbp=q(est.cost_gbp, "cost_gbp"),
            roi_years=q(est.roi_years, "roi_years") if est.cost_gbp > 0 and est.money_gbp > 0 else None,
            pct_energy=q(100.0 * est.energy_kwh / e0, "pct_energy"),
            pct_co2=q(100.0 * est.carbon_kg / central_values["co2_kg_year"], "pct_co2"),
            parts=[PartOut(project=p.project, energy_kwh=p.energy_kwh, carbon_kg=p.carbon_kg,
                           money_gbp=p.money_gbp, cost_gbp=p.cost_gbp, flags=list(p.flags))
                   for p in est.parts.values()],
            mc=mc_out, warnings=warnings, profile_hash=profile_hash,
            model_version=model_payload["model_version"])

    @app.get("/boroughs")
    def boroughs(metric: str = "loft:energy_kwh"):
        if portfolio_dir is None:
            return JSONResponse(status_code=404, content={
                "error": "no portfolio mounted",
                "detail": "run the portfolio command and pass its output directory to serve"})
        name = metric.replace(":", "_")
        path = Path(portfolio_dir) / f"heatmap_{name}.json"
        if not path.exists():
            available = sorted(p.stem.replace("heatmap_", "") for p in
                               Path(portfolio_dir).glob("heatmap_*.json"))
            return JSONResponse(status_code=404, content={
                "error": f"metric {metric!r} not exported",
                "detail": f"available: {', '.join(available) or 'none'}"})
        return json.loads(path.read_text())

    return app
