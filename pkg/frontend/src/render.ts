/**
 * Pure renderers: planner state in, HTML strings out. No DOM access here,
 * so everything is testable in node. Every displayed number comes from the
 * service response verbatim (formatting only, never recomputation).
 */

import type { FieldError, PinnedScenario, PlannerState } from "./state.js";
import { disabledReason, projectDisabled } from "./state.js";
import type { BoroughTable, EstimateResponse, McSummary, ProjectName, Quantity } from "./types.js";
import { AGE_BANDS } from "./types.js";

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

/** Display formatting: integers for large magnitudes, one decimal below 100. */
export function fmtNumber(value: number): string {
  if (!Number.isFinite(value)) return "n/a";
  const rounded = Math.abs(value) >= 100 ? Math.round(value) : Math.round(value * 10) / 10;
  return String(rounded);
}

export function fmtQuantity(q: Quantity | null): string {
  if (q === null) return "n/a";
  return `${fmtNumber(q.value)} ${q.units}`;
}

function bandFromMc(mc: Record<string, McSummary> | null, column: string): string {
  const summary = mc?.[column];
  if (summary === undefined) return "";
  return ` <span class="band">±${fmtNumber(summary.std)}</span>`;
}

const PROPERTY_TYPES = ["House", "Flat", "Bungalow", "Maisonette", "Park Home"] as const;
const BUILT_FORMS = [
  "Detached", "Semi-Detached", "End-Terrace", "Mid-Terrace",
  "Enclosed End-Terrace", "Enclosed Mid-Terrace",
] as const;

function options(values: readonly string[], selected: string): string {
  return values
    .map((v) => `<option value="${esc(v)}"${v === selected ? " selected" : ""}>${esc(v)}</option>`)
    .join("");
}

function fieldError(errors: FieldError[], field: string): string {
  const err = errors.find((e) => e.field === field);
  return err ? `<span class="field-error">${esc(err.message)}</span>` : "";
}

export function renderProfileForm(state: PlannerState, errors: FieldError[] = []): string {
  const f = state.form;
  return `
<fieldset id="profile-form">
  <legend>Dwelling</legend>
  <label>Property type
    <select data-field="propertyType">${options(PROPERTY_TYPES, f.propertyType)}</select>
  </label>
  <label>Built form
    <select data-field="builtForm">${options(BUILT_FORMS, f.builtForm)}</select>
  </label>
  <label>Age band
    <select data-field="ageBand">${options(AGE_BANDS, f.ageBand)}</select>
  </label>
  <label>Floor area (m2)
    <input data-field="floorArea" value="${esc(f.floorArea)}" inputmode="decimal">
    ${fieldError(errors, "floorArea")}
  </label>
  <label>Windows already multi-glazed (%)
    <input data-field="glazedPercent" value="${esc(f.glazedPercent)}" inputmode="decimal">
    ${fieldError(errors, "glazedPercent")}
  </label>
  <label>Lighting already LED (%)
    <input data-field="ledPercent" value="${esc(f.ledPercent)}" inputmode="decimal">
    ${fieldError(errors, "ledPercent")}
  </label>
  <label>Current loft insulation (cm)
    <input data-field="loftCm" value="${esc(f.loftCm)}" inputmode="decimal">
    ${fieldError(errors, "loftCm")}
  </label>
  <label>Main heating fuel
    <select data-field="fuel">${options(["Gas", "Electricity"], f.fuel)}</select>
  </label>
</fieldset>`;
}

interface ToggleSpec {
  project: ProjectName;
  label: string;
  extra: string;
}

export function renderWhatIfPanel(state: PlannerState): string {
  const toggles: ToggleSpec[] = [
    {
      project: "loft",
      label: "Loft insulation",
      extra: `<input type="range" data-target="loftCm" min="5" max="40" step="1"
        value="${state.targets.loftCm}"> target ${state.targets.loftCm} cm`,
    },
    {
      project: "windows",
      label: "Windows",
      extra: `<select data-target="glazingRoute">
        ${options(["auto", "double", "triple"], state.targets.glazingRoute)}</select>`,
    },
    { project: "lighting", label: "LED lighting", extra: "" },
    { project: "heat_pump", label: "Heat pump", extra: "" },
  ];
  const rows = toggles
    .map((t) => {
      const disabled = projectDisabled(t.project, state.form.propertyType);
      const reason = disabledReason(t.project, state.form.propertyType);
      return `<label class="toggle${disabled ? " disabled" : ""}"${
        reason ? ` title="${esc(reason)}"` : ""
      }>
    <input type="checkbox" data-project="${t.project}"
      ${state.toggles[t.project] && !disabled ? "checked" : ""}${disabled ? " disabled" : ""}>
    ${esc(t.label)} ${t.extra}
  </label>`;
    })
    .join("\n");
  return `<fieldset id="what-if"><legend>Projects</legend>\n${rows}\n</fieldset>`;
}

export function renderResultCards(state: PlannerState): string {
  const r = state.lastResponse;
  if (r === null) {
    return `<section id="results" class="empty">Toggle a project to see savings.</section>`;
  }
  const staleClass = state.stale ? " stale" : "";
  const moneyClass = r.money_gbp.value < 0 ? " negative" : "";
  const negativeNote =
    r.money_gbp.value < 0
      ? `<p class="note">Money savings are negative: a heat pump only pays when the
         electricity it draws costs less than the fuel it displaces.</p>`
      : "";
  const warnings = r.warnings.filter((w) => !w.startsWith("calibrated"));
  return `
<section id="results" class="cards${staleClass}">
  <div class="card"><h3>Energy</h3>
    <p class="value">${fmtQuantity(r.energy_kwh)}${bandFromMc(r.mc, "energy_kwh")}</p>
    <p class="sub">${fmtNumber(r.pct_energy.value)}% of bare demand</p></div>
  <div class="card"><h3>Carbon</h3>
    <p class="value">${fmtQuantity(r.carbon_kg)}${bandFromMc(r.mc, "carbon_kg")}</p>
    <p class="sub">${fmtNumber(r.pct_co2.value)}% of annual emissions</p></div>
  <div class="card${moneyClass}"><h3>Bills</h3>
    <p class="value">${fmtQuantity(r.money_gbp)}${bandFromMc(r.mc, "money_gbp")}</p></div>
  <div class="card"><h3>Cost</h3>
    <p class="value">${fmtQuantity(r.cost_gbp)}${bandFromMc(r.mc, "cost_gbp")}</p>
    <p class="sub">payback ${fmtQuantity(r.roi_years)}</p></div>
  ${negativeNote}
  ${warnings.map((w) => `<p class="warning">${esc(w)}</p>`).join("")}
</section>`;
}

const COMPARE_ROWS: Array<{ key: keyof EstimateResponse & string; label: string }> = [
  { key: "energy_kwh", label: "Energy (kWh/yr)" },
  { key: "carbon_kg", label: "Carbon (kgCO2/yr)" },
  { key: "money_gbp", label: "Bills (GBP/yr)" },
  { key: "cost_gbp", label: "Cost (GBP)" },
  { key: "roi_years", label: "Payback (years)" },
];

export function renderScenarioCompare(pinned: PinnedScenario[]): string {
  if (pinned.length === 0) {
    return `<section id="compare" class="empty">Pin a scenario to compare.</section>`;
  }
  const header = pinned.map((p) => `<th>${esc(p.label)}</th>`).join("");
  const body = COMPARE_ROWS.map(({ key, label }) => {
    const values = pinned.map((p) => p.response[key] as Quantity | null);
    const numbers = values.map((q) => (q === null ? NaN : q.value));
    const best = Math.max(...numbers.filter((v) => !Number.isNaN(v)));
    const cells = values
      .map((q, i) => {
        const highlight = !Number.isNaN(numbers[i] ?? NaN) && numbers[i] === best && pinned.length > 1;
        return `<td${highlight ? ' class="best"' : ""}>${q === null ? "n/a" : fmtNumber(q.value)}</td>`;
      })
      .join("");
    return `<tr><th>${esc(label)}</th>${cells}</tr>`;
  }).join("\n");
  return `<section id="compare"><table><thead><tr><th></th>${header}</tr></thead>
<tbody>${body}</tbody></table></section>`;
}

export function renderBoroughChart(table: BoroughTable): string {
  const rows = [...table.rows].sort((a, b) => b.mean - a.mean);
  const top = rows[0]?.mean ?? 0;
  const bars = rows
    .map((row) => {
      const width = top > 0 ? Math.max(1, Math.round((100 * row.mean) / top)) : 1;
      return `<div class="bar-row"><span class="bar-label">${esc(row.borough)}</span>
  <div class="bar" style="width:${width}%"></div>
  <span class="bar-value">${fmtNumber(row.mean)}</span></div>`;
    })
    .join("\n");
  return `<section id="boroughs"><h3>${esc(table.metric)} by borough (mean per dwelling)</h3>
${bars}</section>`;
}

export function renderServiceBanner(state: PlannerState): string {
  if (!state.serviceDown) return "";
  return `<div id="banner" class="banner">Service unreachable; showing the last
results (marked stale).</div>`;
}
