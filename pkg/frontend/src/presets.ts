/**
 * Named scenario presets over the reference bare house (semi-detached,
 * 1930-1949, 109 m2, gas, no upgrades yet).
 */

import type { PlannerState, ProjectToggles } from "./state.js";
import { initialState } from "./state.js";

export type PresetName = "A" | "B" | "C" | "D";

const PRESET_TOGGLES: Record<PresetName, ProjectToggles> = {
  A: { windows: true, loft: true, lighting: false, heat_pump: false },
  B: { loft: true, windows: true, lighting: true, heat_pump: false },
  C: { loft: true, windows: true, lighting: false, heat_pump: true },
  D: { windows: true, lighting: true, loft: true, heat_pump: true },
};

export const PRESET_LABELS: Record<PresetName, string> = {
  A: "A: windows + loft",
  B: "B: loft + windows + LED",
  C: "C: loft + windows + heat pump",
  D: "D: all four projects",
};

export function applyPreset(state: PlannerState, preset: PresetName): PlannerState {
  const base = initialState();
  return {
    ...state,
    form: base.form,
    targets: base.targets,
    toggles: { ...PRESET_TOGGLES[preset] },
    stale: true, // needs a fresh service answer
  };
}
