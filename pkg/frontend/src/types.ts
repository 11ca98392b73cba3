/** Wire types of the review-session protocol. */

export type Decision = 'pending' | 'keep' | 'discard';

export interface CandidateEntry {
  id: number;
  key: string;
  kind: 'squared' | 'interaction';
  label: string;
  var_a: number;
  var_b: number | null;
  p_value: number;
  test_statistic: number;
  decision: Decision;
}

export interface SessionState {
  session_id: string;
  finalized: boolean;
  pending_count: number;
  candidates: CandidateEntry[];
}

export interface PlotPoint {
  x: number;
  y: number;
  group: 'low' | 'high';
  censored: boolean;
}

export interface PlotView {
  points: PlotPoint[];
  x_label: string;
  y_label: string;
  group_label: string;
  log_scale: boolean;
}

export interface PlotResponse {
  candidate_id: number;
  views: PlotView[];
}

export interface FinalizeResponse {
  finalized: boolean;
  kept: string[];
}

export interface ProtocolError {
  error: string;
  pending_count?: number;
}
