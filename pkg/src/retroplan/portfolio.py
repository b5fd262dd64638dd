"""Stock-wide runs: evaluate every dwelling, aggregate by borough, and
scale borough means up to absolute totals.

Supplement semantics throughout: each project tops the dwelling up from its
current level to the target (15 cm loft, fully multi-glazed windows, 100%
LED), so a dwelling already at target contributes zero savings and zero
cost. Loft insulation and heat pumps apply to houses only.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from . import engine
from .engine import EvalMode, GlazingRoute, LightingPlan, LoftPlan, WindowsPlan
from .errors import DataError
from .ingest import impute_height_and_volume
from .params import DEFAULT_PARAMS, ParamSet
from .records import DwellingRecord, PropertyType
from .regression import BareHomeModel, group_for, rescale_to_bare
from .uncertainty import McSummary

log = logging.getLogger(__name__)

PORTFOLIO_DELTA_T = 10.0  # K, fixed for stock runs

OUTPUT_COLUMNS = ("energy_kwh", "carbon_kg", "money_gbp", "cost_gbp")


@dataclass(frozen=True)
class PortfolioConfig:
    """Stock-run options. ``e0_source`` picks where the bare demand comes
    from: the fitted model's prediction (default) or the record's measured
    consumption, both rescaled to the bare reference."""

    e0_source: str = "model"  # or "measured"
    delta_t: float = PORTFOLIO_DELTA_T
    loft_target_cm: float = 15.0
    n_bulbs: int = 12
    params: ParamSet = field(default_factory=lambda: DEFAULT_PARAMS)

    def __post_init__(self):
        if self.e0_source not in ("model", "measured"):
            raise ValueError("e0_source must be 'model' or 'measured'")


@dataclass(frozen=True)
class DwellingEstimate:
    dwelling_id: str
    borough: str
    property_type: PropertyType
    floor_area: float
    annual_consumption: float
    e0_kwh_year: float
    projects: dict  # project -> ProjectEstimate, eligible projects only
    warnings: tuple = ()

    def eligible(self, project: str) -> bool:
        return project in self.projects


def bare_demand(record: DwellingRecord, model: BareHomeModel, config: PortfolioConfig) -> float:
    """Annual bare-home demand for one record, from the configured source."""
    group = group_for(record.property_type)
    if config.e0_source == "model":
        rec = record if record.volume is not None else impute_height_and_volume(record, model.height_means)
        e0, _ = model.predict_bare_annual(rec, group)
        return e0
    value, _ = rescale_to_bare(record.annual_consumption, group, model.rescale)
    return value


def evaluate_dwelling(record: DwellingRecord, model: BareHomeModel,
                      config: PortfolioConfig = PortfolioConfig()) -> DwellingEstimate:
    """Fraction-mode supplement estimates for every project the dwelling is
    eligible for, at the stock-run temperature difference."""
    params = config.params.replace(thermal={"delta_t": config.delta_t})
    e0 = bare_demand(record, model, config)
    warnings: list = []
    if e0 <= 0:
        # Clamped-to-zero prediction: no basis for fraction-mode savings.
        warnings.append("zero_bare_demand")
        dwelling = None
    else:
        dwelling = engine.Dwelling(e0_kwh_year=e0, property_type=record.property_type,
                                   fuel=record.main_fuel, floor_area=record.floor_area)

    projects: dict = {}
    if dwelling is not None:
        projects[engine.WINDOWS] = engine.evaluate_windows(
            WindowsPlan(glazed_fraction=record.multi_glaze_proportion,
                        route=GlazingRoute.AUTO, mode=EvalMode.FRACTION),
            dwelling, params)
        projects[engine.LIGHTING] = engine.evaluate_lighting(
            LightingPlan(led_fraction=record.low_energy_lighting, n_bulbs=config.n_bulbs),
            dwelling, params)
        if record.property_type is PropertyType.HOUSE:
            loft = engine.evaluate_loft(
                LoftPlan(target_cm=config.loft_target_cm, current_cm=record.loft_insulation_cm,
                         mode=EvalMode.FRACTION),
                dwelling, params)
            projects[engine.LOFT] = loft
            try:
                projects[engine.HEAT_PUMP] = engine.evaluate_heat_pump(
                    dwelling, projects[engine.WINDOWS].energy_kwh, loft.energy_kwh, params)
            except engine.HeatingBudgetError:
                warnings.append("heating_budget_exhausted")
    return DwellingEstimate(
        dwelling_id=record.id, borough=record.borough, property_type=record.property_type,
        floor_area=record.floor_area, annual_consumption=record.annual_consumption,
        e0_kwh_year=e0, projects=projects, warnings=tuple(warnings))


def run_portfolio(records: Sequence[DwellingRecord], model: BareHomeModel,
                  config: PortfolioConfig = PortfolioConfig()) -> list:
    """Evaluate every record; records that fail to encode are skipped and
    logged, never fatal."""
    estimates = []
    for record in records:
        try:
            estimates.append(evaluate_dwelling(record, model, config))
        except (DataError, ValueError) as exc:
            log.warning("skipping dwelling %s: %s", record.id, exc)
    return estimates


@dataclass(frozen=True)
class BoroughAggregate:
    borough: str
    n_dwellings: int
    n_houses: int
    mean_floor_area: float
    mean_consumption: float
    # project -> column -> McSummary over the eligible dwellings
    project_stats: dict

    def stat(self, project: str, column: str) -> Optional[McSummary]:
        return self.project_stats.get(project, {}).get(column)


def aggregate_by_borough(estimates: Sequence[DwellingEstimate]) -> list:
    """Per-borough summary statistics for each project and output column,
    ordered by borough name. House-only projects are denominated over the
    eligible (house) dwellings only."""
    if not estimates:
        raise DataError("no estimates to aggregate")
    by_borough: dict[str, list] = {}
    for est in estimates:
        by_borough.setdefault(est.borough, []).append(est)
    aggregates = []
    for borough in sorted(by_borough):
        group = by_borough[borough]
        project_stats: dict = {}
        for project in engine.PROJECTS:
            eligible = [e for e in group if e.eligible(project)]
            if not eligible:
                continue
            stats = {}
            for column in OUTPUT_COLUMNS:
                samples = [getattr(e.projects[project], _PART_FIELDS[column]) for e in eligible]
                stats[column] = McSummary.from_samples(samples)
            project_stats[project] = stats
        aggregates.append(BoroughAggregate(
            borough=borough,
            n_dwellings=len(group),
            n_houses=sum(1 for e in group if e.property_type is PropertyType.HOUSE),
            mean_floor_area=float(np.mean([e.floor_area for e in group])),
            mean_consumption=float(np.mean([e.annual_consumption for e in group])),
            project_stats=project_stats,
        ))
    return aggregates


_PART_FIELDS = {"energy_kwh": "energy_kwh", "carbon_kg": "carbon_kg",
                "money_gbp": "money_gbp", "cost_gbp": "cost_gbp"}


@dataclass(frozen=True)
class ProjectTotals:
    project: str
    total_cost_gbp: float
    total_energy_kwh: float
    total_carbon_kg: float
    total_money_gbp: float

    @property
    def roi_years(self) -> float:
        return self.total_cost_gbp / self.total_money_gbp if self.total_money_gbp > 0 else math.inf


@dataclass(frozen=True)
class StockTotals:
    per_project: dict  # project -> ProjectTotals
    dwelling_counts: dict  # borough -> dwellings in the stock
    house_ratios: dict  # borough -> houses / dwellings

    def project(self, name: str) -> ProjectTotals:
        return self.per_project[name]


def stock_totals(aggregates: Sequence[BoroughAggregate],
                 dwelling_counts: Mapping[str, float],
                 house_ratios: Mapping[str, float]) -> StockTotals:
    """Scale per-borough means up to absolute stock totals.

    Whole-stock projects multiply the borough mean by the borough's dwelling
    count; house-only projects additionally scale by the house ratio.
    """
    for agg in aggregates:
        if agg.borough not in dwelling_counts:
            raise DataError(f"no dwelling count for borough: {agg.borough}")
        if agg.borough not in house_ratios:
            raise DataError(f"no house ratio for borough: {agg.borough}")
    per_project = {}
    for project in engine.PROJECTS:
        cost = energy = carbon = money = 0.0
        seen = False
        for agg in aggregates:
            stats = agg.project_stats.get(project)
            if stats is None:
                continue
            seen = True
            count = float(dwelling_counts[agg.borough])
            if project in engine.HOUSE_ONLY_PROJECTS:
                count *= float(house_ratios[agg.borough])
            cost += stats["cost_gbp"].mean * count
            energy += stats["energy_kwh"].mean * count
            carbon += stats["carbon_kg"].mean * count
            money += stats["money_gbp"].mean * count
        if seen:
            per_project[project] = ProjectTotals(project, cost, energy, carbon, money)
    return StockTotals(per_project=per_project,
                       dwelling_counts=dict(dwelling_counts),
                       house_ratios=dict(house_ratios))


HEATMAP_METRICS = tuple(f"{p}:{c}" for p in engine.PROJECTS for c in OUTPUT_COLUMNS + ("roi_years",))


def export_heatmap_table(aggregates: Sequence[BoroughAggregate], metric: str,
                         path: Union[str, Path]) -> dict:
    """Write one metric's per-borough table as CSV plus a JSON mirror for
    the UI. ``metric`` is "<project>:<column>"; the roi_years column is the
    borough-mean cost over borough-mean money savings."""
    if metric not in HEATMAP_METRICS:
        raise ValueError(f"unknown metric {metric!r}; valid: {', '.join(HEATMAP_METRICS)}")
    project, column = metric.split(":", 1)
    rows = []
    for agg in aggregates:
        stats = agg.project_stats.get(project)
        if stats is None:
            continue
        if column == "roi_years":
            cost, money = stats["cost_gbp"].mean, stats["money_gbp"].mean
            mean = cost / money if money > 0 else math.inf
            rows.append({"borough": agg.borough, "n": stats["cost_gbp"].n,
                         "mean": mean, "std": 0.0})
        else:
            s = stats[column]
            rows.append({"borough": agg.borough, "n": s.n, "mean": s.mean, "std": s.std})
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["borough", "n", "mean", "std"])
        writer.writeheader()
        writer.writerows(rows)
    payload = {"metric": metric, "rows": rows}
    path.with_suffix(".json").write_text(json.dumps(payload, indent=2) + "\n")
    return payload


def write_borough_csv(aggregates: Sequence[BoroughAggregate], path: Union[str, Path]) -> None:
    """Full per-borough table: one row per (borough, project), mean/std/
    quartiles for every output column."""
    fieldnames = ["borough", "project", "n", "mean_floor_area", "mean_consumption"]
    for column in OUTPUT_COLUMNS:
        for stat in ("mean", "std", "min", "q25", "q50", "q75", "max"):
            fieldnames.append(f"{column}_{stat}")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for agg in aggregates:
            for project, stats in agg.project_stats.items():
                row = {"borough": agg.borough, "project": project,
                       "n": stats["energy_kwh"].n,
                       "mean_floor_area": f"{agg.mean_floor_area:.2f}",
                       "mean_consumption": f"{agg.mean_consumption:.2f}"}
                for column in OUTPUT_COLUMNS:
                    s = stats[column]
                    for stat in ("mean", "std", "min", "q25", "q50", "q75", "max"):
                        row[f"{column}_{stat}"] = f"{getattr(s, stat):.2f}"
                writer.writerow(row)


def write_totals_csv(totals: StockTotals, path: Union[str, Path]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=[
            "project", "total_cost_gbp", "total_energy_kwh",
            "total_carbon_kg", "total_money_gbp", "roi_years"])
        writer.writeheader()
        for project in engine.PROJECTS:
            if project not in totals.per_project:
                continue
            t = totals.per_project[project]
            writer.writerow({
                "project": project,
                "total_cost_gbp": f"{t.total_cost_gbp:.2f}",
                "total_energy_kwh": f"{t.total_energy_kwh:.2f}",
                "total_carbon_kg": f"{t.total_carbon_kg:.2f}",
                "total_money_gbp": f"{t.total_money_gbp:.2f}",
                "roi_years": f"{t.roi_years:.4f}" if math.isfinite(t.roi_years) else "inf",
            })


def load_house_ratios(path: Union[str, Path, None] = None) -> dict:
    """Borough -> house/dwelling ratio. Defaults to the packaged table."""
    if path is None:
        source = resources.files("retroplan.data").joinpath("house_ratio.csv")
        text = source.read_text()
    else:
        text = Path(path).read_text()
    ratios = {}
    for row in csv.DictReader(text.splitlines()):
        ratios[row["borough"]] = float(row["house_ratio"])
    return ratios
