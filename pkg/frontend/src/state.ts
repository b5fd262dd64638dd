/**
 * Planner state: the dwelling form, project toggles and targets, the last
 * service answer, and up to three pinned comparison scenarios.
 *
 * The form is always serialisable to a valid EstimateRequest or to a list
 * of field errors; the UI computes no physics of its own.
 */

import type {
  AgeBand,
  BuiltForm,
  EstimateRequest,
  EstimateResponse,
  Fuel,
  GlazingRoute,
  ProjectName,
  PropertyType,
} from "./types.js";
import { AGE_BANDS } from "./types.js";

export interface DwellingForm {
  propertyType: PropertyType;
  builtForm: BuiltForm;
  ageBand: AgeBand;
  floorArea: string; // raw input text; validated on serialisation
  glazedPercent: string; // 0-100, mirrors the certificate convention
  ledPercent: string;
  loftCm: string;
  fuel: Fuel;
}

export interface ProjectToggles {
  loft: boolean;
  windows: boolean;
  lighting: boolean;
  heat_pump: boolean;
}

export interface Targets {
  loftCm: number;
  glazingRoute: GlazingRoute;
}

export interface PinnedScenario {
  label: string;
  request: EstimateRequest;
  response: EstimateResponse;
}

export interface PlannerState {
  form: DwellingForm;
  toggles: ProjectToggles;
  targets: Targets;
  mcDraws: number;
  mcSeed: number;
  lastResponse: EstimateResponse | null;
  /** Last answer no longer matches the form (request in flight or failed). */
  stale: boolean;
  serviceDown: boolean;
  pinned: PinnedScenario[];
  boroughMetric: string;
}

export const HOUSE_ONLY: ReadonlySet<ProjectName> = new Set(["loft", "heat_pump"]);

export function initialState(): PlannerState {
  return {
    form: {
      propertyType: "House",
      builtForm: "Semi-Detached",
      ageBand: "1930-1949",
      floorArea: "109",
      glazedPercent: "0",
      ledPercent: "0",
      loftCm: "0",
      fuel: "Gas",
    },
    toggles: { loft: false, windows: false, lighting: false, heat_pump: false },
    targets: { loftCm: 15, glazingRoute: "auto" },
    mcDraws: 1000,
    mcSeed: 0,
    lastResponse: null,
    stale: false,
    serviceDown: false,
    pinned: [],
    boroughMetric: "loft:energy_kwh",
  };
}

export interface FieldError {
  field: keyof DwellingForm;
  message: string;
}

function parseNumber(raw: string, field: keyof DwellingForm, errors: FieldError[]): number {
  const value = Number(raw.trim());
  if (raw.trim() === "" || Number.isNaN(value)) {
    errors.push({ field, message: "enter a number" });
    return NaN;
  }
  return value;
}

/** Validate the form; a valid form yields the exact request body to send. */
export function buildRequest(state: PlannerState): { request: EstimateRequest } | { errors: FieldError[] } {
  const errors: FieldError[] = [];
  const f = state.form;
  const floorArea = parseNumber(f.floorArea, "floorArea", errors);
  const glazed = parseNumber(f.glazedPercent, "glazedPercent", errors);
  const led = parseNumber(f.ledPercent, "ledPercent", errors);
  const loftCm = parseNumber(f.loftCm, "loftCm", errors);
  if (!Number.isNaN(floorArea) && floorArea <= 10) {
    errors.push({ field: "floorArea", message: "floor area must exceed 10 m2" });
  }
  for (const [value, field] of [
    [glazed, "glazedPercent"],
    [led, "ledPercent"],
  ] as const) {
    if (!Number.isNaN(value) && (value < 0 || value > 100)) {
      errors.push({ field, message: "percentage must lie in 0-100" });
    }
  }
  if (!Number.isNaN(loftCm) && loftCm < 0) {
    errors.push({ field: "loftCm", message: "insulation depth cannot be negative" });
  }
  if (!AGE_BANDS.includes(f.ageBand)) {
    errors.push({ field: "ageBand", message: "unknown age band" });
  }
  if (errors.length > 0) return { errors };

  const eligible = eligibleToggles(state.toggles, f.propertyType);
  return {
    request: {
      dwelling: {
        property_type: f.propertyType,
        built_form: f.builtForm,
        age_band: f.ageBand,
        floor_area: floorArea,
        glazed_fraction: glazed / 100,
        led_fraction: led / 100,
        loft_cm: loftCm,
        fuel: f.fuel,
      },
      projects: eligible,
      targets: { loft_cm: state.targets.loftCm, glazing_route: state.targets.glazingRoute },
      mode: "area",
      mc: { n: state.mcDraws, seed: state.mcSeed },
    },
  };
}

/** Restore form values from a request body (used by pinned-scenario recall). */
export function formFromRequest(request: EstimateRequest): {
  form: DwellingForm;
  toggles: ProjectToggles;
  targets: Targets;
} {
  const d = request.dwelling;
  return {
    form: {
      propertyType: d.property_type,
      builtForm: d.built_form,
      ageBand: d.age_band,
      floorArea: String(d.floor_area),
      glazedPercent: String(d.glazed_fraction * 100),
      ledPercent: String(d.led_fraction * 100),
      loftCm: String(d.loft_cm),
      fuel: d.fuel,
    },
    toggles: {
      loft: request.projects.loft ?? false,
      windows: request.projects.windows ?? false,
      lighting: request.projects.lighting ?? false,
      heat_pump: request.projects.heat_pump ?? false,
    },
    targets: {
      loftCm: request.targets?.loft_cm ?? 15,
      glazingRoute: request.targets?.glazing_route ?? "auto",
    },
  };
}

export function projectDisabled(project: ProjectName, propertyType: PropertyType): boolean {
  return HOUSE_ONLY.has(project) && propertyType !== "House";
}

export function disabledReason(project: ProjectName, propertyType: PropertyType): string | null {
  return projectDisabled(project, propertyType)
    ? `${project === "loft" ? "Loft insulation" : "A heat pump"} only applies to houses, not ${propertyType}`
    : null;
}

/** Toggles as sent to the service: house-only projects are forced off for
 * other property types (the controls are disabled in the UI as well). */
export function eligibleToggles(toggles: ProjectToggles, propertyType: PropertyType): ProjectToggles {
  return {
    loft: toggles.loft && !projectDisabled("loft", propertyType),
    windows: toggles.windows,
    lighting: toggles.lighting,
    heat_pump: toggles.heat_pump && !projectDisabled("heat_pump", propertyType),
  };
}

export const MAX_PINNED = 3;

export function pinScenario(state: PlannerState, label: string): PlannerState {
  if (state.lastResponse === null || state.stale) return state;
  const built = buildRequest(state);
  if ("errors" in built) return state;
  const snapshot: PinnedScenario = {
    label,
    // deep-copied so later edits cannot mutate a pinned scenario
    request: JSON.parse(JSON.stringify(built.request)) as EstimateRequest,
    response: JSON.parse(JSON.stringify(state.lastResponse)) as EstimateResponse,
  };
  const pinned = [...state.pinned, snapshot].slice(-MAX_PINNED);
  return { ...state, pinned };
}

export function unpinScenario(state: PlannerState, index: number): PlannerState {
  return { ...state, pinned: state.pinned.filter((_, i) => i !== index) };
}
