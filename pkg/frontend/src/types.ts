/** Wire types of the gaitbench service; field names mirror the JSON payloads. */

export type Gender = 'female' | 'male' | 'unspecified';
export type ParamStateWire = 'in_range' | 'out_of_range' | 'no_data';

export interface PatientMetaWire {
  id: string;
  age: number;
  body_mass_kg: number;
  body_height_cm: number;
  gender: Gender;
}

export interface StpRowWire {
  stp_id: number;
  name: string;
  foot: 'left' | 'right';
  unit: string;
  value: number | null;
}

export interface GraphWire {
  foot: 'left' | 'right';
  step_curves: number[][];
  mean_curve: number[];
}

export interface SeriesWire {
  times_s: number[];
  values_bw: number[];
}

export interface CombinedWire {
  sample_rate_hz: number;
  left: SeriesWire;
  right: SeriesWire;
}

export interface LoadResponse {
  patient: PatientMetaWire;
  stps: StpRowWire[];
  graphs: { left: GraphWire; right: GraphWire; combined: CombinedWire };
}

export interface MatchResultWire {
  category_id: string;
  category_name: string;
  score: number;
  n_used: number;
  epsilon: number;
  summary: ParamStateWire[];
}

export interface MatchPayload {
  results: MatchResultWire[];
}

export interface StatsWire {
  stp_id: number;
  n: number;
  mean: number | null;
  std_dev: number | null;
  min: number | null;
  max: number | null;
  q1: number | null;
  median: number | null;
  q3: number | null;
  raw_values: number[];
}

export interface DifferenceWire {
  d: number | null; // null means degenerate (infinite)
  degenerate: boolean;
}

export interface ItbpRowWire {
  stp_id: number;
  name: string;
  foot: 'left' | 'right';
  unit: string;
  norm: StatsWire;
  selected: StatsWire;
  patient_left: number | null;
  patient_right: number | null;
  difference: DifferenceWire | null;
}

export interface ParametersPayload {
  category_id: string;
  category_name: string;
  parameters: ItbpRowWire[];
}

export interface RangeWire {
  stp_id: number;
  min: number | null;
  max: number | null;
  manual: boolean;
}

export interface TreeCategoryWire {
  id: string;
  name: string;
  is_norm: boolean;
  n_patients: number;
  manual_stp_ids: number[];
  has_manual_override: boolean;
  patients: { id: string; added_at: string }[];
  ranges: RangeWire[];
}

export interface TreePayload {
  categories: TreeCategoryWire[];
}

/** Demographic filter as edited in the panel; empty strings mean "no bound". */
export interface FilterState {
  genders: Gender[];
  ageMin: string;
  ageMax: string;
  heightMin: string;
  heightMax: string;
  massMin: string;
  massMax: string;
}

export function emptyFilter(): FilterState {
  return {
    genders: [],
    ageMin: '',
    ageMax: '',
    heightMin: '',
    heightMax: '',
    massMin: '',
    massMax: '',
  };
}
