// Form field catalog and the form-state <-> request mapping.
//
// Valid ranges come from limits.json, which is generated from the server's
// own limit tables (scripts/export_limits.py in the parent package), so a
// value the form accepts is a value the service accepts.

import rawLimits from "./limits.json";
import type { PresetEntry, SizeRequest } from "./api";

type Bounds = [number, number];

interface LimitsDoc {
  vehicle: Record<string, Bounds>;
  constraints: Record<string, Bounds>;
  atmosphere: Record<string, Bounds>;
  atmosphere_models: string[];
  regulatory_ceiling_m: number;
}

export const LIMITS = rawLimits as unknown as LimitsDoc;

export type Section = "vehicle" | "constraints";

export interface FieldSpec {
  /** dotted path, also the DOM id and the server's error key */
  id: string;
  section: Section;
  key: string;
  label: string;
  unit: string;
  lo: number;
  hi: number;
  step: number;
  /** render an extra slider control */
  slider?: boolean;
}

function field(section: Section, key: string, label: string, unit: string,
               step: number, slider = false): FieldSpec {
  const pair = LIMITS[section][key];
  if (!pair) throw new Error(`no limits entry for ${section}.${key}`);
  return { id: `${section}.${key}`, section, key, label, unit,
           lo: pair[0], hi: pair[1], step, slider };
}

export const FIELDS: FieldSpec[] = [
  field("vehicle", "mass_kg", "Mass", "kg", 0.1),
  field("vehicle", "engine_power_w", "Shaft power", "W", 5, true),
  field("vehicle", "prop_diameter_m", "Prop diameter", "m", 0.01),
  field("vehicle", "reference_area_m2", "Planform area", "m^2", 0.005),
  field("vehicle", "drag_coeff", "Drag coeff (clean)", "", 0.05),
  field("vehicle", "drag_coeff_brake", "Drag coeff (brake)", "", 0.05),
  field("vehicle", "thrust_derating", "Thrust derating", "", 0.01),
  field("constraints", "max_altitude_m", "Ceiling", "m", 0.1),
  field("constraints", "park_altitude_m", "Park altitude", "m", 0.5),
  field("constraints", "initial_launch_speed_mps", "Launch speed", "m/s", 0.5),
];

/** form state: dotted field id -> numeric value */
export type FormState = Record<string, number>;

export function stateFromPreset(preset: PresetEntry): FormState {
  const state: FormState = {};
  for (const f of FIELDS) {
    const source = f.section === "vehicle" ? preset.vehicle : preset.constraints;
    state[f.id] = source[f.key];
  }
  return state;
}

/** Range check mirroring the server: inclusive bounds, NaN rejected.
 * Returns one message per offending field id; empty object when clean. */
export function validate(state: FormState): Record<string, string> {
  const errors: Record<string, string> = {};
  for (const f of FIELDS) {
    const v = state[f.id];
    if (v === undefined || Number.isNaN(v)) {
      errors[f.id] = `${f.key}: must be a number`;
      continue;
    }
    if (v < f.lo || v > f.hi) {
      errors[f.id] = `${f.key}: ${v} outside allowed range [${f.lo}, ${f.hi}]`;
    }
  }
  return errors;
}

/** Field-for-field mapping into the request body; nothing added, nothing
 * dropped, values passed through untouched. */
export function toRequest(state: FormState): SizeRequest {
  const body: SizeRequest = { vehicle: {}, constraints: {} };
  for (const f of FIELDS) {
    body[f.section][f.key] = state[f.id];
  }
  return body;
}
