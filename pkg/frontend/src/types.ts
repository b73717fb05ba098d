/**
 * Wire types mirroring the server's document schemas.
 *
 * The UI never computes model parameters or scores: every number shown on
 * screen arrives in one of these shapes from the API.
 */

export type IntensityName =
  | "VeryWeak"
  | "Weak"
  | "Moderate"
  | "Strong"
  | "VeryStrong"
  | "Extreme";

export const INTENSITY_NAMES: IntensityName[] = [
  "VeryWeak",
  "Weak",
  "Moderate",
  "Strong",
  "VeryStrong",
  "Extreme",
];

/** A gap answer: an intensity, an explicit tie, or not answered yet. */
export type GapAnswer = IntensityName | "Tie" | null;

export interface Violation {
  code: string;
  message: string;
  subject: string[];
}

export interface SessionDoc {
  id: string;
  version: number;
  finalized: boolean;
  complete: boolean;
  violations: Violation[];
  kind: "utility" | "capacity";
  gaps: GapAnswer[];
  // utility sessions
  metric_id?: string;
  elements?: number[];
  good?: number;
  // capacity sessions
  node_id?: string;
  children?: string[];
  ranking?: string[][];
}

export interface UtilityDoc {
  metric_id: string;
  direction: "higher_is_better" | "lower_is_better";
  breakpoints: [number, number][];
  bad_index: number;
  good_index: number;
}

export interface PairWeight {
  pair: [string, string];
  weight: number;
}

export interface ChoquetDoc {
  singletons: Record<string, number>;
  min_pairs: PairWeight[];
  max_pairs: PairWeight[];
}

export interface ModelNodeDoc {
  id: string;
  kind: "criterion" | "aggregation";
  label: string;
  utility?: UtilityDoc;
  choquet?: ChoquetDoc;
}

export interface ModelDoc {
  schema_version: number;
  root: string;
  scope_label: string;
  metric_aggregation: Record<string, string>;
  nodes: ModelNodeDoc[];
}

export interface InspectAggregation {
  label: string;
  children: string[];
  importance: Record<string, number>;
  interaction: { pair: [string, string]; value: number }[];
  singletons: Record<string, number>;
  min_pairs: PairWeight[];
  max_pairs: PairWeight[];
}

export interface InspectCriterion {
  label: string;
  metric_id: string;
  direction: string;
  breakpoints: [number, number][];
  bad_value: number;
  good_value: number;
}

export interface InspectDoc {
  model_id: string;
  root: string;
  scope_label: string;
  aggregations: Record<string, InspectAggregation>;
  criteria: Record<string, InspectCriterion>;
}

export interface RankingRow {
  rank: number;
  alternative_id: string;
  root_score: number;
  scores: Record<string, number>;
  efficiency_per_joule?: number;
}

export interface EvaluationDoc {
  root: string;
  columns: string[];
  ranking: RankingRow[];
  warnings: string[];
  intervals?: Record<string, Record<string, [number, number]>>;
}

export interface ExplanationDoc {
  alternative_id: string;
  reference: "worst" | "ideal";
  root: string;
  root_contribution: number;
  contributions: Record<string, number>;
  percentages: Record<string, number | null>;
  reference_values: Record<string, number>;
}

export interface ProfileBody {
  alternative_id: string;
  values: Record<string, number>;
  intervals?: Record<string, [number, number]>;
}

export interface Override {
  node_id: string;
  choquet?: ChoquetDoc;
  utility?: UtilityDoc;
}

export interface IngestReportDoc {
  accepted: number;
  rejected: { index: number; reason: string }[];
}
