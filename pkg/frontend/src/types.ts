/** Payload and state types mirroring the server's JSON contracts. */

export type Method = "NetworkCentrality" | "StaticInnovativeness" | "ContextualFactor";
export type Basis = "all-range" | "years-range" | "one-year";
export type StateSort = "alphabetical" | "measurement-desc";
export type PolicySort = "alphabetical" | "total-adoptions-desc" | "policy-activity";

export interface ViewConfig {
  topic: string;              // "ALL" or a topic label
  from: number;
  to: number;
  method: Method;
  measurement: string;
  basis: Basis;
  basisYear: number | null;
  stateSort: StateSort;
  policySort: PolicySort;
  activityState: string | null;
}

export type Relation = "incoming" | "outgoing" | "bidirectional" | "directed";

export interface PatternEdge {
  source: string;
  target: string;
  relation: Relation;
  count?: number;
}

export interface PatternsPayload {
  upper: PatternEdge[];
  lower: PatternEdge[];
  focus: { state: string | null; cell_topic: string | null; policy: string | null };
}

export interface MatrixCell {
  state: string;
  creations: number;
  adoptions: number;
  creation_bin: number;
  adoption_bin: number;
  circle?: "initiator" | "adopter" | null;
}

export interface MatrixRow {
  key: string;
  label: string;
  cells: MatrixCell[];
}

export interface MatrixPayload {
  kind: "topics" | "policies";
  states: string[];
  rows: MatrixRow[];
}

export interface MapPayload {
  measurement: string;
  values: Record<string, number>;
  bins: Record<string, number>;
  order: string[];
}

export interface YearEntry { year: number; creations: number; adoptions: number }
export interface StateEntry { state: string; creations: number; adoptions: number }
export interface TopicEntry { topic: string; policies?: number; introduced?: number; adopted?: number }

export interface ContextBox { state: string; year: number; value: number; first_year: boolean }
export interface ContextSeries { state: string; values: number[] }
export interface ContextPayload {
  tab: "context";
  policy: string;
  state: string | null;
  factor: string;
  years: number[];
  series: ContextSeries[];
  us_mean: number[];
  boxes: ContextBox[];
}

export interface AdoptionsPayload {
  tab: string;
  series?: YearEntry[] | StateEntry[] | TopicEntry[];
}

export interface CoxFactor {
  factor: string;
  hazard_ratio: number;
  p_value: number | null;
  significant: boolean;
  dropped: string | null;
}

export interface CoxPayload {
  policy_id: string;
  converged?: boolean;
  factors?: CoxFactor[];
  error?: string;
  detail?: string;
}

export interface OptionsPayload {
  topics: string[];
  states: string[];
  year_bounds: [number, number];
  methods: Record<string, string[]>;
  defaults: {
    topic: string;
    year_range: [number, number];
    method: Method;
    measurement: string;
    basis: Basis;
    state_sort: StateSort;
    policy_sort: PolicySort;
  };
}

export interface SearchPayload {
  keyword: string;
  groups: { topic: string; policies: { policy_id: string; display_name: string }[] }[];
}

export type HoverFocus =
  | { kind: "none" }
  | { kind: "state"; state: string }
  | { kind: "cell"; state: string; topic: string }
  | { kind: "policy"; policy: string; state: string | null };

export type MapStyle = "geographic" | "hexbin";
export type AdoptionTab = "year" | "state" | "topic" | "context";

export interface UiState {
  config: ViewConfig;
  hover: HoverFocus;
  contextSelection: { policy: string | null; state: string | null; factor: string | null };
  mapStyle: MapStyle;
  sharedY: boolean;
  activeTab: AdoptionTab;
}
