/**
 * Wire types mirroring the service's committed JSON schemas
 * (src/retroplan/schemas/estimate_request.json / estimate_response.json).
 */

export type PropertyType = "House" | "Flat" | "Bungalow" | "Maisonette" | "Park Home";
export type BuiltForm =
  | "Detached"
  | "Semi-Detached"
  | "End-Terrace"
  | "Mid-Terrace"
  | "Enclosed End-Terrace"
  | "Enclosed Mid-Terrace";
export type Fuel = "Gas" | "Electricity";
export type GlazingRoute = "auto" | "double" | "triple";
export type ProjectName = "loft" | "windows" | "lighting" | "heat_pump";

export const AGE_BANDS = [
  "pre1900", "1900-1929", "1930-1949", "1950-1966", "1967-1975", "1976-1982",
  "1983-1990", "1991-1995", "1996-2002", "2003-2006", "2007-2011", "2012-2022",
] as const;
export type AgeBand = (typeof AGE_BANDS)[number];

export interface DwellingIn {
  property_type: PropertyType;
  built_form: BuiltForm;
  age_band: AgeBand;
  floor_area: number;
  floor_height?: number | null;
  glazed_fraction: number;
  led_fraction: number;
  loft_cm: number;
  fuel: Fuel;
}

export interface EstimateRequest {
  dwelling: DwellingIn;
  projects: { loft?: boolean; windows?: boolean; lighting?: boolean; heat_pump?: boolean };
  targets?: { loft_cm?: number; glazing_route?: GlazingRoute };
  mode?: "area" | "fraction";
  mc?: { n: number; seed: number } | null;
  overrides?: { e0_kwh_year?: number | null; e0_std?: number | null };
}

export interface Quantity {
  value: number;
  units: string;
}

export interface PartOut {
  project: ProjectName;
  energy_kwh: number;
  carbon_kg: number;
  money_gbp: number;
  cost_gbp: number;
  flags: string[];
}

export interface McSummary {
  n: number;
  mean: number;
  std: number;
  min: number;
  q25: number;
  q50: number;
  q75: number;
  max: number;
  units: string;
}

export interface EstimateResponse {
  e0_kwh_year: Quantity;
  e0_std_kwh_year: Quantity;
  energy_kwh: Quantity;
  carbon_kg: Quantity;
  money_gbp: Quantity;
  cost_gbp: Quantity;
  roi_years: Quantity | null;
  pct_energy: Quantity;
  pct_co2: Quantity;
  parts: PartOut[];
  mc: Record<string, McSummary> | null;
  warnings: string[];
  profile_hash: string;
  model_version: string;
}

export interface BoroughRow {
  borough: string;
  n: number;
  mean: number;
  std: number;
}

export interface BoroughTable {
  metric: string;
  rows: BoroughRow[];
}
