"""Stock runs: supplement semantics, borough aggregation, totals, and the
heatmap export, checked against hand-computed fixtures."""

import json

import pytest

from retroplan import engine, portfolio as pf
from retroplan.errors import DataError
from retroplan.portfolio import (PortfolioConfig, aggregate_by_borough, evaluate_dwelling,
                                 export_heatmap_table, load_house_ratios, run_portfolio,
                                 stock_totals)
from retroplan.records import PropertyType
from retroplan.regression import load_model

from conftest import make_record

from importlib import resources


@pytest.fixture(scope="module")
def model():
    with resources.as_file(resources.files("retroplan.data") / "baseline_model.json") as p:
        return load_model(p)


def estimate_for(model, **overrides):
    return evaluate_dwelling(make_record(**overrides), model)


class TestEvaluateDwelling:
    def test_house_gets_all_four_projects(self, model):
        est = estimate_for(model)
        assert set(est.projects) == {engine.LOFT, engine.WINDOWS, engine.LIGHTING,
                                     engine.HEAT_PUMP}

    def test_flat_has_no_house_projects(self, model):
        est = estimate_for(model, property_type=PropertyType.FLAT)
        assert set(est.projects) == {engine.WINDOWS, engine.LIGHTING}

    def test_fully_upgraded_house_zeroes_everything_but_hp(self, model):
        est = estimate_for(model, loft_insulation_cm=15.0, multi_glaze_proportion=1.0,
                           low_energy_lighting=1.0)
        for name in (engine.LOFT, engine.WINDOWS, engine.LIGHTING):
            assert est.projects[name].energy_kwh == 0.0
            assert est.projects[name].cost_gbp == 0.0
        assert est.projects[engine.HEAT_PUMP].energy_kwh > 0.0

    def test_partial_upgrades_save_less_than_bare(self, model):
        bare = estimate_for(model)
        partial = estimate_for(model, multi_glaze_proportion=0.85, low_energy_lighting=0.53,
                               loft_insulation_cm=9.2)
        for name in (engine.LOFT, engine.WINDOWS, engine.LIGHTING):
            assert partial.projects[name].energy_kwh < bare.projects[name].energy_kwh

    def test_supplement_idempotent(self, model):
        # once supplemented to target, re-evaluating finds nothing to do
        est = estimate_for(model, loft_insulation_cm=15.0, multi_glaze_proportion=1.0,
                           low_energy_lighting=1.0)
        again = estimate_for(model, loft_insulation_cm=15.0, multi_glaze_proportion=1.0,
                             low_energy_lighting=1.0)
        for name in (engine.LOFT, engine.WINDOWS, engine.LIGHTING):
            assert est.projects[name].energy_kwh == again.projects[name].energy_kwh == 0.0

    def test_measured_e0_source(self, model):
        config = PortfolioConfig(e0_source="measured")
        est = evaluate_dwelling(make_record(annual_consumption=29530.0), model, config)
        factor = 1.1259
        assert est.e0_kwh_year == pytest.approx(29530.0 * factor, rel=1e-3)

    def test_triple_route_for_highly_glazed(self, model):
        est = estimate_for(model, multi_glaze_proportion=0.8)
        assert "triple_material_priced_as_double" in est.projects[engine.WINDOWS].flags


class TestAggregation:
    def test_identical_estimates_have_zero_std(self, model):
        records = [make_record(id=f"r{i}", borough="Sutton") for i in range(3)]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        (agg,) = aggs
        assert agg.borough == "Sutton"
        assert agg.n_dwellings == 3
        for column in pf.OUTPUT_COLUMNS:
            assert agg.stat(engine.LOFT, column).std == 0.0

    def test_two_borough_hand_means(self, model):
        records = [
            make_record(id="a1", borough="Camden", floor_area=100.0),
            make_record(id="a2", borough="Camden", floor_area=120.0),
            make_record(id="b1", borough="Sutton", floor_area=80.0),
        ]
        aggs = {a.borough: a for a in aggregate_by_borough(run_portfolio(records, model))}
        assert aggs["Camden"].mean_floor_area == pytest.approx(110.0)
        assert aggs["Sutton"].mean_floor_area == pytest.approx(80.0)
        # borough mean equals the mean of the per-dwelling estimates
        parts = [evaluate_dwelling(r, model).projects[engine.LIGHTING].energy_kwh
                 for r in records[:2]]
        assert aggs["Camden"].stat(engine.LIGHTING, "energy_kwh").mean == pytest.approx(
            sum(parts) / 2)

    def test_permutation_invariance(self, model):
        records = [make_record(id=f"r{i}", borough=b, floor_area=50.0 + 7 * i)
                   for i, b in enumerate(["Camden", "Sutton", "Camden", "Brent", "Sutton"])]
        a = aggregate_by_borough(run_portfolio(records, model))
        b = aggregate_by_borough(run_portfolio(list(reversed(records)), model))
        assert a == b

    def test_house_only_projects_denominated_over_houses(self, model):
        records = [make_record(id="h", borough="Camden"),
                   make_record(id="f", borough="Camden", property_type=PropertyType.FLAT)]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        (agg,) = aggs
        assert agg.stat(engine.LOFT, "energy_kwh").n == 1
        assert agg.stat(engine.WINDOWS, "energy_kwh").n == 2

    def test_empty_errors(self):
        with pytest.raises(DataError):
            aggregate_by_borough([])


class TestTotals:
    def test_single_borough_hand_arithmetic(self, model):
        records = [make_record(id="x", borough="Camden")]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        totals = stock_totals(aggs, {"Camden": 100}, {"Camden": 0.5})
        loft_mean_cost = aggs[0].stat(engine.LOFT, "cost_gbp").mean
        light_mean_cost = aggs[0].stat(engine.LIGHTING, "cost_gbp").mean
        # house-only project scales by count x ratio; whole-stock by count
        assert totals.project(engine.LOFT).total_cost_gbp == pytest.approx(
            loft_mean_cost * 100 * 0.5)
        assert totals.project(engine.LIGHTING).total_cost_gbp == pytest.approx(
            light_mean_cost * 100)

    def test_totals_linear_in_counts(self, model):
        records = [make_record(id=f"r{i}", borough="Camden", floor_area=90.0 + i)
                   for i in range(4)]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        t1 = stock_totals(aggs, {"Camden": 100}, {"Camden": 0.4})
        t2 = stock_totals(aggs, {"Camden": 200}, {"Camden": 0.4})
        for project in t1.per_project:
            assert t2.project(project).total_cost_gbp == pytest.approx(
                2 * t1.project(project).total_cost_gbp)

    def test_roi_is_cost_over_money(self, model):
        records = [make_record(id="x", borough="Camden")]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        totals = stock_totals(aggs, {"Camden": 10}, {"Camden": 1.0})
        t = totals.project(engine.LIGHTING)
        assert t.roi_years == pytest.approx(t.total_cost_gbp / t.total_money_gbp)

    def test_ratio_table_lookup(self):
        ratios = load_house_ratios()
        assert ratios["Barking and Dagenham"] == pytest.approx(0.62)
        assert len(ratios) == 33

    def test_missing_borough_errors(self, model):
        records = [make_record(id="x", borough="Camden")]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        with pytest.raises(DataError, match="Camden"):
            stock_totals(aggs, {"Camden": 10}, {"Sutton": 0.5})


class TestHeatmapExport:
    def test_round_trip(self, model, tmp_path):
        records = [make_record(id=f"r{i}", borough=b)
                   for i, b in enumerate(["Camden", "Sutton"])]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        payload = export_heatmap_table(aggs, "lighting:energy_kwh", tmp_path / "hm.csv")
        mirrored = json.loads((tmp_path / "hm.json").read_text())
        assert mirrored == payload
        assert [r["borough"] for r in payload["rows"]] == ["Camden", "Sutton"]
        text = (tmp_path / "hm.csv").read_text().splitlines()
        assert text[0] == "borough,n,mean,std"

    def test_roi_metric_for_all_projects(self, model, tmp_path):
        records = [make_record(id="x", borough="Camden")]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        for project in engine.PROJECTS:
            payload = export_heatmap_table(aggs, f"{project}:roi_years",
                                           tmp_path / f"{project}.csv")
            assert payload["rows"][0]["mean"] > 0

    def test_unknown_metric_lists_valid(self, model, tmp_path):
        records = [make_record(id="x", borough="Camden")]
        aggs = aggregate_by_borough(run_portfolio(records, model))
        with pytest.raises(ValueError, match="lighting:energy_kwh"):
            export_heatmap_table(aggs, "nope", tmp_path / "x.csv")
