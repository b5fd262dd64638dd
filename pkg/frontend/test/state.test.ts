/**
 * Form <-> request serialisation: lossless round trip, validation, and the
 * request bodies match the service's committed schema conventions.
 */

import { describe, expect, it } from "vitest";
import { buildRequest, eligibleToggles, formFromRequest, initialState, projectDisabled } from "../src/state";
import recordedRequest from "./fixtures/preset_b_request.json";
import type { EstimateRequest } from "../src/types";

describe("buildRequest", () => {
  it("serialises the default form to a valid request", () => {
    const state = initialState();
    state.toggles.lighting = true;
    const built = buildRequest(state);
    expect("request" in built).toBe(true);
    const request = ("request" in built ? built.request : null)!;
    expect(request.dwelling).toEqual({
      property_type: "House",
      built_form: "Semi-Detached",
      age_band: "1930-1949",
      floor_area: 109,
      glazed_fraction: 0,
      led_fraction: 0,
      loft_cm: 0,
      fuel: "Gas",
    });
    expect(request.projects.lighting).toBe(true);
    expect(request.mode).toBe("area");
    expect(request.mc).toEqual({ n: 1000, seed: 0 });
  });

  it("matches the recorded request for the reference scenario shape", () => {
    const recorded = recordedRequest as EstimateRequest;
    const state = initialState();
    state.toggles = { loft: true, windows: true, lighting: true, heat_pump: false };
    state.mcSeed = 7;
    const built = buildRequest(state);
    const request = ("request" in built ? built.request : null)!;
    expect(request.dwelling).toEqual(recorded.dwelling);
    expect(request.targets).toEqual(recorded.targets);
    expect(request.mode).toEqual(recorded.mode);
  });

  it("collects every invalid field with a message", () => {
    const state = initialState();
    state.form.floorArea = "9";
    state.form.glazedPercent = "150";
    state.form.loftCm = "-3";
    const built = buildRequest(state);
    expect("errors" in built).toBe(true);
    const fields = ("errors" in built ? built.errors : []).map((e) => e.field);
    expect(fields).toContain("floorArea");
    expect(fields).toContain("glazedPercent");
    expect(fields).toContain("loftCm");
  });

  it("forces house-only projects off for other property types", () => {
    const state = initialState();
    state.form.propertyType = "Flat";
    state.toggles = { loft: true, windows: true, lighting: false, heat_pump: true };
    const built = buildRequest(state);
    const request = ("request" in built ? built.request : null)!;
    expect(request.projects.loft).toBe(false);
    expect(request.projects.heat_pump).toBe(false);
    expect(request.projects.windows).toBe(true);
  });
});

describe("round trip", () => {
  it("form -> request -> form is lossless for a house with every project", () => {
    const state = initialState();
    state.form.ageBand = "1996-2002";
    state.form.floorArea = "87.5";
    state.form.glazedPercent = "42";
    state.form.ledPercent = "12.5";
    state.form.loftCm = "7.5";
    state.form.fuel = "Electricity";
    state.toggles = { loft: true, windows: true, lighting: true, heat_pump: true };
    state.targets = { loftCm: 22, glazingRoute: "triple" };
    const built = buildRequest(state);
    const request = ("request" in built ? built.request : null)!;
    const restored = formFromRequest(request);
    expect(restored.form).toEqual(state.form);
    expect(restored.toggles).toEqual(state.toggles);
    expect(restored.targets).toEqual(state.targets);
  });

  it("round trip reflects the eligibility filter for non-houses", () => {
    const state = initialState();
    state.form.propertyType = "Bungalow";
    state.form.builtForm = "End-Terrace";
    // loft cannot survive serialisation for a bungalow: the control is
    // disabled and the request must not carry it
    state.toggles = { loft: true, windows: true, lighting: true, heat_pump: false };
    const built = buildRequest(state);
    const request = ("request" in built ? built.request : null)!;
    const restored = formFromRequest(request);
    expect(restored.form.propertyType).toBe("Bungalow");
    expect(restored.toggles).toEqual({
      loft: false,
      windows: true,
      lighting: true,
      heat_pump: false,
    });
  });
});

describe("eligibility helpers", () => {
  it("house-only projects require a house", () => {
    expect(projectDisabled("loft", "House")).toBe(false);
    expect(projectDisabled("loft", "Flat")).toBe(true);
    expect(projectDisabled("heat_pump", "Maisonette")).toBe(true);
    expect(projectDisabled("windows", "Flat")).toBe(false);
    expect(projectDisabled("lighting", "Park Home")).toBe(false);
  });

  it("eligibleToggles never enables a blocked project", () => {
    const all = { loft: true, windows: true, lighting: true, heat_pump: true };
    expect(eligibleToggles(all, "Flat")).toEqual({
      loft: false,
      windows: true,
      lighting: true,
      heat_pump: false,
    });
    expect(eligibleToggles(all, "House")).toEqual(all);
  });
});
