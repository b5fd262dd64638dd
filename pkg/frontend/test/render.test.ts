/**
 * Snapshot-style checks: rendered values equal the service response
 * verbatim, eligibility disables controls, empty states render cleanly.
 */

import { describe, expect, it } from "vitest";
import { renderProfileForm, renderResultCards, renderScenarioCompare, renderWhatIfPanel } from "../src/render";
import { initialState, type PlannerState } from "../src/state";
import type { EstimateResponse } from "../src/types";
import recorded from "./fixtures/preset_b_response.json";

const recordedResponse = recorded as EstimateResponse;

function stateWithResponse(response: EstimateResponse, overrides: Partial<PlannerState> = {}): PlannerState {
  return {
    ...initialState(),
    toggles: { loft: true, windows: true, lighting: true, heat_pump: false },
    lastResponse: response,
    ...overrides,
  };
}

describe("result cards", () => {
  it("renders the service's preset-B figure unmodified", () => {
    // what the production service reports for the reference scenario
    const response: EstimateResponse = {
      ...recordedResponse,
      energy_kwh: { value: 9104.0, units: "kWh/yr" },
    };
    const html = renderResultCards(stateWithResponse(response));
    expect(html).toContain("9104 kWh/yr");
  });

  it("renders every headline value from the recorded fixture verbatim", () => {
    const html = renderResultCards(stateWithResponse(recordedResponse));
    expect(html).toContain(`${Math.round(recordedResponse.energy_kwh.value)} kWh/yr`);
    expect(html).toContain(`${Math.round(recordedResponse.carbon_kg.value)} kgCO2/yr`);
    expect(html).toContain(`${Math.round(recordedResponse.money_gbp.value)} GBP/yr`);
    expect(html).toContain(`${Math.round(recordedResponse.cost_gbp.value)} GBP`);
    // one-sigma bands come straight from the Monte-Carlo summaries
    const mc = recordedResponse.mc;
    expect(mc).not.toBeNull();
    expect(html).toContain(`±${Math.round(mc!["energy_kwh"]!.std)}`);
  });

  it("zeroes the cards when every toggle is off", () => {
    const zero: EstimateResponse = {
      ...recordedResponse,
      energy_kwh: { value: 0, units: "kWh/yr" },
      carbon_kg: { value: 0, units: "kgCO2/yr" },
      money_gbp: { value: 0, units: "GBP/yr" },
      cost_gbp: { value: 0, units: "GBP" },
      roi_years: null,
      pct_energy: { value: 0, units: "%" },
      pct_co2: { value: 0, units: "%" },
      mc: null,
      parts: [],
    };
    const html = renderResultCards(stateWithResponse(zero));
    expect(html).toContain("0 kWh/yr");
    expect(html).toContain("0 GBP");
    expect(html).toContain("payback n/a");
  });

  it("marks negative money savings and explains them", () => {
    const negative: EstimateResponse = {
      ...recordedResponse,
      money_gbp: { value: -42.5, units: "GBP/yr" },
      roi_years: null,
    };
    const html = renderResultCards(stateWithResponse(negative));
    expect(html).toContain("negative");
    expect(html).toContain("electricity it draws costs less");
  });

  it("dims the cards while an answer is stale", () => {
    const html = renderResultCards(stateWithResponse(recordedResponse, { stale: true }));
    expect(html).toContain("stale");
  });
});

describe("eligibility", () => {
  it("disables loft and heat pump for a flat, with a tooltip", () => {
    const state = initialState();
    state.form.propertyType = "Flat";
    const html = renderWhatIfPanel(state);
    const loftRow = html.split("<label")!.find((chunk) => chunk.includes('data-project="loft"'))!;
    const hpRow = html.split("<label")!.find((chunk) => chunk.includes('data-project="heat_pump"'))!;
    for (const row of [loftRow, hpRow]) {
      expect(row).toContain("disabled");
      expect(row).toContain("only applies to houses");
    }
  });

  it("keeps all toggles enabled for a house", () => {
    const html = renderWhatIfPanel(initialState());
    expect(html).not.toContain("disabled");
  });
});

describe("profile form", () => {
  it("flags invalid fields inline", () => {
    const state = initialState();
    state.form.floorArea = "five";
    const html = renderProfileForm(state, [{ field: "floorArea", message: "enter a number" }]);
    expect(html).toContain("field-error");
    expect(html).toContain("enter a number");
  });
});

describe("scenario comparison", () => {
  it("renders pinned scenarios side by side and highlights the best value", () => {
    const a = { label: "A", request: {} as never, response: recordedResponse };
    const b = {
      label: "B",
      request: {} as never,
      response: { ...recordedResponse, energy_kwh: { value: 99999, units: "kWh/yr" } },
    };
    const html = renderScenarioCompare([a, b]);
    expect(html).toContain("<th>A</th>");
    expect(html).toContain("<th>B</th>");
    expect(html).toContain('class="best">99999');
  });
});
