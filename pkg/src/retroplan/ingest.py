"""Parse, validate, and clean EPC-style CSV extracts into canonical records.

Rows that violate a rule are never silently dropped: every rejection lands
in the IngestReport with the rule that fired. Parsing is a pure per-row
transform; output order always equals input order.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Optional, Sequence, Union

from .errors import ConfigError
from .records import (BoroughRegistry, DEFAULT_BOROUGHS, DwellingRecord, Fuel, PropertyType,
                      parse_age_band, parse_built_form, parse_property_type)

# Canonical fields, in canonical CSV column order.
CANONICAL_FIELDS = (
    "id", "borough", "property_type", "built_form", "age_band",
    "floor_area", "floor_height", "annual_consumption",
    "multi_glaze_fraction", "low_energy_lighting_fraction",
    "loft_insulation_cm", "main_fuel", "has_heat_pump",
)

REQUIRED_FIELDS = frozenset({
    "borough", "property_type", "built_form", "age_band",
    "floor_area", "annual_consumption",
    "multi_glaze_fraction", "low_energy_lighting_fraction",
})


@dataclass(frozen=True)
class ColumnMap:
    """Canonical field -> source column. ``percent_fields`` are stored as
    0-100 in the source and normalised to [0,1] at parse time. When
    ``heating_from_description`` is set, fuel and heat-pump status come from
    a free-text heating description column instead of dedicated columns."""

    columns: Mapping[str, str]
    percent_fields: frozenset = frozenset({"multi_glaze_fraction", "low_energy_lighting_fraction"})
    heating_from_description: bool = True

    def source(self, canonical: str) -> Optional[str]:
        return self.columns.get(canonical)


# UK EPC bulk-download headers.
EPC_COLUMN_MAP = ColumnMap(columns={
    "id": "LMK_KEY",
    "borough": "LOCAL_AUTHORITY_LABEL",
    "property_type": "PROPERTY_TYPE",
    "built_form": "BUILT_FORM",
    "age_band": "CONSTRUCTION_AGE_BAND",
    "floor_area": "TOTAL_FLOOR_AREA",
    "floor_height": "FLOOR_HEIGHT",
    "annual_consumption": "ENERGY_CONSUMPTION_CURRENT",
    "multi_glaze_fraction": "MULTI_GLAZE_PROPORTION",
    "low_energy_lighting_fraction": "LOW_ENERGY_LIGHTING",
    "loft_insulation_cm": "LOFT_INSULATION_THICKNESS",
    "heating_description": "MAINHEAT_DESCRIPTION",
})

# Identity map for re-reading canonical CSV output; fractions are already
# unit-scaled there and heating is stored as explicit fields.
CANONICAL_COLUMN_MAP = ColumnMap(
    columns={f: f for f in CANONICAL_FIELDS},
    percent_fields=frozenset(),
    heating_from_description=False,
)


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_kept: int = 0
    rejections: list = field(default_factory=list)  # (row id, rule violated)
    imputation_counts: dict = field(default_factory=dict)

    def note_imputation(self, field_name: str) -> None:
        self.imputation_counts[field_name] = self.imputation_counts.get(field_name, 0) + 1

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_kept": self.rows_kept,
            "rejections": [{"id": rid, "rule": rule} for rid, rule in self.rejections],
            "imputation_counts": dict(sorted(self.imputation_counts.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class RowRejected(Exception):
    def __init__(self, rule: str):
        self.rule = rule
        super().__init__(rule)


def _require(row: Mapping[str, str], column: str, label: str) -> str:
    value = row.get(column)
    if value is None or value.strip() == "":
        raise RowRejected(f"missing {label}")
    return value.strip()


def _number(row: Mapping[str, str], column: str, label: str) -> float:
    raw = _require(row, column, label)
    try:
        return float(raw)
    except ValueError:
        raise RowRejected(f"malformed numeric {label}: {raw!r}") from None


def _parse_row(row: Mapping[str, str], row_id: str, cmap: ColumnMap,
               boroughs: BoroughRegistry, report: IngestReport) -> DwellingRecord:
    cols = cmap.columns

    borough_label = _require(row, cols["borough"], "borough")
    try:
        borough = boroughs.resolve(borough_label)
    except KeyError:
        raise RowRejected(f"unknown borough: {borough_label!r}") from None

    try:
        property_type = parse_property_type(_require(row, cols["property_type"], "property type"))
        built_form = parse_built_form(_require(row, cols["built_form"], "built form"))
        age_band = parse_age_band(_require(row, cols["age_band"], "age band"))
    except ValueError as exc:
        raise RowRejected(str(exc)) from None

    floor_area = _number(row, cols["floor_area"], "floor area")
    if floor_area <= 10.0:
        raise RowRejected("floor_area <= 10 m2")

    consumption = _number(row, cols["annual_consumption"], "annual consumption")
    if consumption <= 0.0:
        raise RowRejected("annual_consumption <= 0")

    glaze = _number(row, cols["multi_glaze_fraction"], "multi-glaze proportion")
    lighting = _number(row, cols["low_energy_lighting_fraction"], "low-energy lighting")
    if "multi_glaze_fraction" in cmap.percent_fields:
        glaze /= 100.0
    if "low_energy_lighting_fraction" in cmap.percent_fields:
        lighting /= 100.0
    if not 0.0 <= glaze <= 1.0:
        raise RowRejected("multi_glaze_fraction outside [0,1]")
    if not 0.0 <= lighting <= 1.0:
        raise RowRejected("low_energy_lighting_fraction outside [0,1]")

    floor_height = None
    height_col = cols.get("floor_height")
    if height_col and row.get(height_col, "").strip() != "":
        floor_height = _number(row, height_col, "floor height")

    loft_cm = 0.0
    loft_col = cols.get("loft_insulation_cm")
    if loft_col and row.get(loft_col, "").strip() != "":
        loft_cm = _number(row, loft_col, "loft insulation thickness")
        if loft_cm < 0.0:
            raise RowRejected("loft_insulation_cm < 0")
    else:
        report.note_imputation("loft_insulation_cm")

    if cmap.heating_from_description:
        heating = _require(row, cols["heating_description"], "heating description")
        has_hp = "heat pump" in heating.casefold()
        fuel = Fuel.ELECTRICITY if "electric" in heating.casefold() else Fuel.GAS
    else:
        fuel_raw = _require(row, cols["main_fuel"], "main fuel")
        try:
            fuel = Fuel(fuel_raw.strip().title())
        except ValueError:
            raise RowRejected(f"unknown main fuel: {fuel_raw!r}") from None
        hp_raw = _require(row, cols["has_heat_pump"], "heat pump flag").casefold()
        if hp_raw not in ("true", "false"):
            raise RowRejected(f"malformed heat pump flag: {hp_raw!r}")
        has_hp = hp_raw == "true"

    return DwellingRecord(
        id=row_id, borough=borough, property_type=property_type, built_form=built_form,
        age_band=age_band, floor_area=floor_area, floor_height=floor_height,
        annual_consumption=consumption, multi_glaze_proportion=glaze,
        low_energy_lighting=lighting, loft_insulation_cm=loft_cm,
        main_fuel=fuel, has_heat_pump=has_hp)


def parse_epc_csv(stream: Union[IO[bytes], IO[str], str, bytes, Path],
                  column_map: ColumnMap = EPC_COLUMN_MAP,
                  boroughs: BoroughRegistry = DEFAULT_BOROUGHS,
                  delimiter: str = ","):
    """Parse a CSV stream into (records, report).

    ``stream`` may be a path, raw bytes/str, or an open file. A missing
    mapped column for a required field is a fatal ConfigError; malformed
    rows become per-row rejections in the report.
    """
    text, owned = _as_text(stream)
    try:
        reader = csv.DictReader(text, delimiter=delimiter)
        if reader.fieldnames is None:
            raise ConfigError("input CSV has no header row")
        header = set(reader.fieldnames)

        needed = {column_map.columns[f] for f in REQUIRED_FIELDS if f in column_map.columns}
        missing_fields = REQUIRED_FIELDS - set(column_map.columns)
        if missing_fields:
            raise ConfigError(f"column map does not cover required fields: {sorted(missing_fields)}")
        if column_map.heating_from_description:
            if "heating_description" not in column_map.columns:
                raise ConfigError("column map must name a heating_description column")
            needed.add(column_map.columns["heating_description"])
        else:
            for f in ("main_fuel", "has_heat_pump"):
                if f not in column_map.columns:
                    raise ConfigError(f"column map must name a {f} column")
                needed.add(column_map.columns[f])
        absent = needed - header
        if absent:
            raise ConfigError(f"mapped columns missing from the CSV header: {sorted(absent)}")

        report = IngestReport()
        records: list[DwellingRecord] = []
        id_col = column_map.columns.get("id")
        for i, row in enumerate(reader):
            report.rows_read += 1
            row_id = (row.get(id_col) or "").strip() if id_col else ""
            if not row_id:
                row_id = f"row-{i + 1}"
            try:
                records.append(_parse_row(row, row_id, column_map, boroughs, report))
            except RowRejected as exc:
                report.rejections.append((row_id, exc.rule))
        report.rows_kept = len(records)
        return records, report
    finally:
        if owned is not None:
            owned.close()


def _as_text(stream):
    """(line iterator, handle we own) for the input; file-backed sources
    stream row by row rather than loading the extract into memory."""
    if isinstance(stream, str) and "\n" not in stream and Path(stream).exists():
        stream = Path(stream)
    if isinstance(stream, Path):
        handle = open(stream, "r", encoding="utf-8", newline="")
        return handle, handle
    if isinstance(stream, bytes):
        return io.StringIO(stream.decode("utf-8")), None
    if isinstance(stream, str):
        return io.StringIO(stream), None
    if hasattr(stream, "read") and isinstance(stream.read(0), bytes):
        return io.TextIOWrapper(stream, encoding="utf-8"), None
    return stream, None


def clean_for_regression(records: Sequence[DwellingRecord]) -> list:
    """Drop heat-pump dwellings and out-of-range floor heights; a pure
    filter that preserves input order."""
    return [r for r in records
            if not r.has_heat_pump
            and (r.floor_height is None or 1.0 <= r.floor_height <= 10.0)]


@dataclass(frozen=True)
class HeightStats:
    mean: float
    std: float  # population
    n: int


def height_statistics(records: Sequence[DwellingRecord]) -> dict:
    """Per-property-type mean and population std of valid floor heights.
    Types with no valid-height record are omitted with a warning."""
    groups: dict[PropertyType, list] = {}
    for r in records:
        if r.height_is_valid():
            groups.setdefault(r.property_type, []).append(r.floor_height)
    stats: dict[PropertyType, HeightStats] = {}
    for ptype, heights in groups.items():
        n = len(heights)
        mean = sum(heights) / n
        var = sum((h - mean) ** 2 for h in heights) / n
        stats[ptype] = HeightStats(mean=mean, std=var ** 0.5, n=n)
    missing = [p.value for p in PropertyType if p not in stats]
    if missing:
        warnings.warn(f"no valid floor heights for: {', '.join(missing)}", stacklevel=2)
    return stats


def impute_height_and_volume(record: DwellingRecord, height_means: Mapping) -> DwellingRecord:
    """Attach volume = floor_area x height, using the record's own height
    when it is in range and the property-type mean otherwise."""
    if record.height_is_valid():
        height = record.floor_height
    else:
        height = _mean_height(record.property_type, height_means)
        if height is None:
            raise ConfigError(f"no mean floor height configured for {record.property_type.value}")
    return record.with_volume(record.floor_area * height)


def _mean_height(ptype: PropertyType, height_means: Mapping) -> Optional[float]:
    for key in (ptype, ptype.value):
        if key in height_means:
            value = height_means[key]
            return value.mean if isinstance(value, HeightStats) else float(value)
    return None


def _format_float(v: float) -> str:
    return repr(float(v))


def record_to_row(record: DwellingRecord) -> dict:
    return {
        "id": record.id,
        "borough": record.borough,
        "property_type": record.property_type.value,
        "built_form": record.built_form.value,
        "age_band": record.age_band.value,
        "floor_area": _format_float(record.floor_area),
        "floor_height": "" if record.floor_height is None else _format_float(record.floor_height),
        "annual_consumption": _format_float(record.annual_consumption),
        "multi_glaze_fraction": _format_float(record.multi_glaze_proportion),
        "low_energy_lighting_fraction": _format_float(record.low_energy_lighting),
        "loft_insulation_cm": _format_float(record.loft_insulation_cm),
        "main_fuel": record.main_fuel.value,
        "has_heat_pump": "true" if record.has_heat_pump else "false",
    }


def write_records_csv(records: Sequence[DwellingRecord], target: Union[IO[str], str, Path]) -> None:
    """Write records in the canonical column order; re-parsing the output
    with CANONICAL_COLUMN_MAP reproduces the records exactly."""
    own = isinstance(target, (str, Path))
    handle = open(target, "w", newline="") if own else target
    try:
        writer = csv.DictWriter(handle, fieldnames=list(CANONICAL_FIELDS))
        writer.writeheader()
        for r in records:
            writer.writerow(record_to_row(r))
    finally:
        if own:
            handle.close()


def records_to_csv_text(records: Sequence[DwellingRecord]) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf)
    return buf.getvalue()
