"""Command-line interface: ingest, fit, estimate, portfolio, serve.

Exit codes: 0 success, 1 usage error, 2 data error. All randomness is
seed-controlled; machine-readable output goes to files, human tables to
stdout.
"""

from __future__ import annotations

import csv
import json
import sys
from importlib import resources
from pathlib import Path

import click

from . import engine, portfolio as pf
from .errors import ConfigError, DataError, ModelFormatError, RetroplanError
from .ingest import (CANONICAL_COLUMN_MAP, ColumnMap, EPC_COLUMN_MAP, clean_for_regression,
                     height_statistics, impute_height_and_volume, parse_epc_csv,
                     write_records_csv)
from .params import DEFAULT_PARAMS, load_params
from .regression import (BareHomeModel, Basis, DesignSpec, RescaleParams, cross_validate,
                         fit_records, fit_report_table, load_model, save_model,
                         training_provenance)
from .uncertainty import (BARE_HOUSE, DEFAULT_PRIORS, DwellingProfile, SCENARIO_PROJECTS,
                          mc_table_csv, render_mc_table, scenario_report)

PROJECT_ALIASES = {
    "loft": engine.LOFT, "insulation": engine.LOFT,
    "windows": engine.WINDOWS, "glazing": engine.WINDOWS,
    "led": engine.LIGHTING, "lighting": engine.LIGHTING,
    "hp": engine.HEAT_PUMP, "heatpump": engine.HEAT_PUMP, "heat_pump": engine.HEAT_PUMP,
}

DEFAULT_MODEL = "builtin"


def _load_model_arg(model_path: str) -> BareHomeModel:
    if model_path == DEFAULT_MODEL:
        with resources.as_file(resources.files("retroplan.data") / "baseline_model.json") as p:
            return load_model(p)
    return load_model(model_path)


def _load_params_arg(profile):
    return DEFAULT_PARAMS if profile is None else load_params(profile)


@click.group()
def cli():
    """Retrofit savings analytics: single dwellings and whole stocks."""


@cli.command("ingest")
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--column-map", "column_map_path", type=click.Path(exists=True, path_type=Path),
              help="JSON file mapping canonical fields to source columns.")
@click.option("--canonical-input", is_flag=True,
              help="Input already uses the canonical column layout.")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--clean/--no-clean", default=True, show_default=True,
              help="Drop heat-pump dwellings and out-of-range floor heights.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), default=Path("."),
              show_default=True, help="Directory for records.csv and ingest_report.json.")
def cmd_ingest(input_csv, column_map_path, canonical_input, delimiter, clean, out_dir):
    """Parse and validate an EPC-style CSV into canonical records."""
    cmap = CANONICAL_COLUMN_MAP if canonical_input else EPC_COLUMN_MAP
    if column_map_path:
        payload = json.loads(column_map_path.read_text())
        cmap = ColumnMap(columns=payload.get("columns", payload),
                         percent_fields=frozenset(payload.get("percent_fields",
                                                              list(cmap.percent_fields))),
                         heating_from_description=payload.get("heating_from_description",
                                                              cmap.heating_from_description))
    records, report = parse_epc_csv(input_csv, column_map=cmap, delimiter=delimiter)
    if clean:
        records = clean_for_regression(records)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_records_csv(records, out_dir / "records.csv")
    (out_dir / "ingest_report.json").write_text(report.to_json() + "\n")
    click.echo(f"read {report.rows_read} rows, kept {len(records)} "
               f"({len(report.rejections)} rejected at parse"
               f"{', cleaning filters applied' if clean else ''})")
    click.echo(f"wrote {out_dir / 'records.csv'} and {out_dir / 'ingest_report.json'}")


@cli.command("fit")
@click.argument("records_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--basis", type=click.Choice(["ideal", "vdw"]), default="ideal", show_default=True,
              help="Volume basis: linear, or with inverse-volume terms.")
@click.option("--cv-k", default=10, show_default=True, help="Cross-validation folds (0 skips CV).")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path),
              default=Path("model.json"), show_default=True)
def cmd_fit(records_csv, basis, cv_k, seed, out_path):
    """Fit the baseline consumption model on canonical records."""
    records, report = parse_epc_csv(records_csv, column_map=CANONICAL_COLUMN_MAP)
    if report.rejections:
        click.echo(f"note: {len(report.rejections)} rows rejected at parse", err=True)
    records = clean_for_regression(records)
    if not records:
        raise DataError("no usable records after cleaning")
    heights = height_statistics(records)
    records = [impute_height_and_volume(r, heights) for r in records]
    spec = DesignSpec(basis=Basis.IDEAL_GAS if basis == "ideal" else Basis.VAN_DER_WAALS)
    fit = fit_records(records, spec)
    cv = cross_validate(records, k=cv_k, seed=seed, spec=spec) if cv_k else None
    model = BareHomeModel(
        fit=fit, rescale=RescaleParams.from_params(DEFAULT_PARAMS),
        height_means={p.value: s.mean for p, s in heights.items()},
        cv=cv, provenance=training_provenance(records))
    save_model(model, out_path)
    click.echo(fit_report_table(fit))
    if cv:
        click.echo(f"{cv.k}-fold CV RMSE: {cv.mean_rmse:.2f} (+/- {cv.std_rmse:.2f}) kWh/month")
    click.echo(f"model written to {out_path}")


@cli.command("estimate")
@click.option("--profile", default="bare-house", show_default=True,
              help="'bare-house' or a JSON file describing the dwelling.")
@click.option("--projects", default="loft,windows,led,hp", show_default=True,
              help="Comma-separated projects, or a scenario letter A-D.")
@click.option("--mc", "n_draws", default=1000, show_default=True, help="Monte-Carlo draws.")
@click.option("--seed", default=0, show_default=True)
@click.option("--params", "params_path", type=click.Path(exists=True, path_type=Path),
              help="Parameter profile (JSON/TOML) overriding the built-in defaults.")
@click.option("--clamp-negative-money", is_flag=True,
              help="Floor money-savings draws at zero before summarising.")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text",
              show_default=True)
def cmd_estimate(profile, projects, n_draws, seed, params_path, clamp_negative_money, fmt):
    """Savings / cost / payback block for one dwelling, with uncertainty.

    The defaults reproduce the reference analysis: a semi-detached
    1930-1949 house of 109 m2 on gas, bare of upgrades (29530 kWh/yr).

    \b
    Default priors (mean +/- std):
      external temperature 12 +/- 2 C   (fixed 20 C setpoint)
      gas 0.08 +/- 0.01, electricity 0.30 +/- 0.01 GBP/kWh
      loft material 1.5 +/- 0.5 GBP/(m2 cm), install 15 +/- 5 GBP/m2
      window day rate 120 +/- 20 GBP, material 500 +/- 100 GBP/m2
      U single 5.7 +/- 0.7, double 2.7 +/- 0.7 W/(m2 K)
      heat pump 11000 +/- 2000 GBP, LED bulb 7 +/- 2 GBP
      bare demand 29530 +/- 28 kWh/yr, emissions 5906 +/- 6 kgCO2/yr
    """
    dwelling = _profile_from(profile)
    project_list = _parse_projects(projects)
    base_params = _load_params_arg(params_path)
    report = scenario_report(projects if projects.upper() in SCENARIO_PROJECTS else "X",
                             priors=DEFAULT_PRIORS, n=n_draws, seed=seed, profile=dwelling,
                             base_params=base_params, clamp_nonnegative=clamp_negative_money,
                             projects=project_list)
    _emit_estimate(report, fmt)


def _profile_from(profile: str) -> DwellingProfile:
    if profile == "bare-house":
        return BARE_HOUSE
    path = Path(profile)
    if not path.exists():
        raise ConfigError(f"profile {profile!r} is neither 'bare-house' nor an existing file")
    payload = json.loads(path.read_text())
    from .records import Fuel, parse_age_band, parse_built_form, parse_property_type

    kwargs = {}
    if "property_type" in payload:
        kwargs["property_type"] = parse_property_type(payload["property_type"])
    if "built_form" in payload:
        kwargs["built_form"] = parse_built_form(payload["built_form"])
    if "age_band" in payload:
        kwargs["age_band"] = parse_age_band(payload["age_band"])
    if "fuel" in payload:
        kwargs["fuel"] = Fuel(payload["fuel"].title())
    for key in ("floor_area", "loft_area", "glazed_fraction", "led_fraction",
                "loft_current_cm", "loft_target_cm", "n_bulbs", "e0_kwh_year"):
        if key in payload:
            kwargs[key] = payload[key]
    if "glazing_route" in payload:
        kwargs["glazing_route"] = engine.GlazingRoute(payload["glazing_route"])
    return DwellingProfile(**kwargs)


def _parse_projects(spec: str):
    token = spec.strip()
    if token.upper() in SCENARIO_PROJECTS:
        return SCENARIO_PROJECTS[token.upper()]
    names = []
    for part in token.split(","):
        part = part.strip().casefold()
        if not part:
            continue
        if part not in PROJECT_ALIASES:
            raise click.UsageError(f"unknown project {part!r}; choose from {sorted(PROJECT_ALIASES)}")
        names.append(PROJECT_ALIASES[part])
    return tuple(dict.fromkeys(names))


_COLUMNS = ("energy_kwh", "carbon_kg", "money_gbp", "cost_gbp")
_HEADERS = {"energy_kwh": "Savings (kWh/yr)", "carbon_kg": "Savings (kgCO2/yr)",
            "money_gbp": "Savings (GBP/yr)", "cost_gbp": "Cost (GBP)"}


def _emit_estimate(report, fmt):
    central = report.central
    if fmt == "json":
        payload = {
            "projects": list(report.projects),
            "central": {
                "energy_kwh": central.energy_kwh, "carbon_kg": central.carbon_kg,
                "money_gbp": central.money_gbp, "cost_gbp": central.cost_gbp,
                "roi_years": central.roi_years,
                "pct_energy": report.central_pct_energy, "pct_co2": report.central_pct_co2,
            },
            "mc": {k: v.to_dict() for k, v in report.mc.summaries.items()},
            "n_rejected": report.mc.n_rejected,
            "seed": report.mc.seed,
        }
        click.echo(json.dumps(payload, indent=2))
        return
    if fmt == "csv":
        click.echo(mc_table_csv(report.mc.summaries, [c for c in _COLUMNS
                                                      if c in report.mc.summaries]), nl=False)
        return
    click.echo(f"projects: {', '.join(report.projects) or '(none)'}")
    click.echo(f"central: {central.energy_kwh:.1f} kWh/yr, {central.carbon_kg:.1f} kgCO2/yr, "
               f"{central.money_gbp:.2f} GBP/yr, cost {central.cost_gbp:.2f} GBP")
    roi = f"{central.roi_years:.2f} yr" if central.cost_gbp else "n/a"
    click.echo(f"payback: {roi}; demand reduction {report.central_pct_energy:.1f}%, "
               f"CO2 reduction {report.central_pct_co2:.1f}%")
    cols = [c for c in _COLUMNS if c in report.mc.summaries]
    click.echo(render_mc_table(report.mc.summaries, cols, _HEADERS))
    if "roi_years" in report.mc.summaries:
        s = report.mc.summaries["roi_years"]
        click.echo(f"payback draws: mean {s.mean:.2f} yr (std {s.std:.2f}), "
                   f"{s.n}/{report.mc.n_requested - report.mc.n_rejected} draws recoverable")
    if report.mc.n_rejected:
        click.echo(f"note: {report.mc.n_rejected} of {report.mc.n_requested} draws rejected "
                   f"(out-of-domain parameter samples)")


@cli.command("portfolio")
@click.argument("records_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("model_json", default=DEFAULT_MODEL)
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
              default=Path("portfolio_out"), show_default=True)
@click.option("--e0-source", type=click.Choice(["model", "measured"]), default="model",
              show_default=True, help="Bare demand from the fitted model or from measured consumption.")
@click.option("--house-ratios", "ratio_path", type=click.Path(exists=True, path_type=Path),
              help="CSV borough,house_ratio (defaults to the packaged table).")
@click.option("--counts", "counts_path", type=click.Path(exists=True, path_type=Path),
              help="CSV borough,dwellings for absolute totals (defaults to sample counts).")
@click.option("--params", "params_path", type=click.Path(exists=True, path_type=Path))
@click.option("--heatmap-metric", "metrics", multiple=True,
              help="Extra heatmap_<metric>.csv/json exports (repeatable).")
def cmd_portfolio(records_csv, model_json, out_dir, e0_source, ratio_path, counts_path,
                  params_path, metrics):
    """Evaluate every dwelling in a canonical CSV and aggregate by borough."""
    model = _load_model_arg(model_json)
    records, report = parse_epc_csv(records_csv, column_map=CANONICAL_COLUMN_MAP)
    if not records:
        raise DataError("no parseable records in input")
    config = pf.PortfolioConfig(e0_source=e0_source, params=_load_params_arg(params_path))
    estimates = pf.run_portfolio(records, model, config)
    aggregates = pf.aggregate_by_borough(estimates)
    ratios = pf.load_house_ratios(ratio_path)
    if counts_path:
        counts = {row["borough"]: float(row["dwellings"])
                  for row in csv.DictReader(counts_path.read_text().splitlines())}
    else:
        counts = {a.borough: a.n_dwellings for a in aggregates}
    totals = pf.stock_totals(aggregates, counts, ratios)
    out_dir.mkdir(parents=True, exist_ok=True)
    pf.write_borough_csv(aggregates, out_dir / "portfolio_boroughs.csv")
    pf.write_totals_csv(totals, out_dir / "portfolio_totals.csv")
    wanted = metrics or [f"{p}:energy_kwh" for p in engine.PROJECTS]
    for metric in wanted:
        name = metric.replace(":", "_")
        pf.export_heatmap_table(aggregates, metric, out_dir / f"heatmap_{name}.csv")
    click.echo(f"{len(estimates)} dwellings across {len(aggregates)} boroughs")
    for project in engine.PROJECTS:
        if project in totals.per_project:
            t = totals.per_project[project]
            click.echo(f"{project:10s} cost {t.total_cost_gbp:14.0f} GBP; "
                       f"savings {t.total_money_gbp:12.0f} GBP/yr; payback {t.roi_years:8.2f} yr")
    click.echo(f"tables written to {out_dir}/")


@cli.command("serve")
@click.argument("model_json", default=DEFAULT_MODEL)
@click.option("--portfolio", "portfolio_dir", type=click.Path(file_okay=False, path_type=Path),
              help="Directory of portfolio outputs to serve under /boroughs.")
@click.option("--addr", default="127.0.0.1:8080", show_default=True)
@click.option("--params", "params_path", type=click.Path(exists=True, path_type=Path))
@click.option("--cors-origin", default=None, help="Allowed origin for browser clients.")
def cmd_serve(model_json, portfolio_dir, addr, params_path, cors_origin):
    """Serve the estimation API over HTTP."""
    import uvicorn

    from .service import create_app

    model = _load_model_arg(model_json)
    app = create_app(model, params=_load_params_arg(params_path),
                     portfolio_dir=portfolio_dir, cors_origin=cors_origin)
    host, _, port = addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080))


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except (DataError, ConfigError, ModelFormatError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except RetroplanError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
