export interface ValidationItem {
  item_id: string;
  game_id: string;
  ply: number;
  predicted_placement: string;
  status: 'pending' | 'accepted' | 'corrected';
  corrected_placement: string | null;
  note: string | null;
  correct: boolean | null;
  latency_s: number;
  recorded_at: number;
  validated_at: number | null;
  validation_seq: number | null;
}

export interface ObservationData {
  occupancy: number[];
  color: number[];
  types: number[][];
}

export interface ItemDetail extends ValidationItem {
  observation: ObservationData;
}

export interface MonitorStatus {
  validated: number;
  window: number;
  accuracy: number | null;
  alert: boolean;
  latency_violations: number;
  accuracy_threshold: number;
  latency_budget_s: number;
  no_data: boolean;
}

export interface RunSummary {
  run_id: string;
  created_at: number;
  status: string;
  params: Record<string, string>;
  tags: Record<string, string>;
  metric_keys: string[];
}

export interface MetricPoint {
  step: number;
  timestamp: number;
  value: number;
}

export interface LabelingSummary {
  items: number;
  rows: number;
  per_class: Record<string, number>;
  path: string;
}

export type Verdict =
  | { verdict: 'accepted'; note?: string }
  | { verdict: 'corrected'; placement: string; note?: string };
