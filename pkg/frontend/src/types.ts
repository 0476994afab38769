// Wire types for the trace-exploration HTTP API. These mirror the JSON
// payloads exactly; nothing here is computed client-side.

export type Mode = "sync" | "async" | "undecided";
export type Metric = "inclusive" | "exclusive";
export type MarkShape = "circle" | "triangle";

export interface RunSummary {
  run_id: string;
  application: string;
  timestamp: string;
  policy: Record<string, string>;
  node_count: number;
  total_time_ns: number;
  has_source: boolean;
}

export interface TreeNodePayload {
  id: number;
  name: string;
  mark: MarkShape;
  x: number;
  y: number;
  mode: Mode;
  line: number;
  column: number;
  value_ns: number;
  encoded: number;
  count: number;
  path: string;
  hidden_descendants: number;
  // present only when the payload was built against a second run
  unmatched?: boolean;
  delta_ns?: number;
  mode_b?: Mode;
  mode_changed?: boolean;
}

export interface TreeLinkPayload {
  source: number;
  target: number;
}

export interface ComparisonBlock {
  run_b: string;
  slower: string | null;
  totals: { run_a: number; run_b: number };
}

export interface TreePayload {
  run_id: string;
  metric: Metric;
  collapsed: number[];
  compare_with: string | null;
  level_gap: number;
  sibling_gap: number;
  width: number;
  height: number;
  nodes: TreeNodePayload[];
  edges: TreeLinkPayload[];
  comparison?: ComparisonBlock;
}

export interface ElidedEdge {
  source: number;
  target: number;
  kind: string;
  peer: number;
  peer_name: string;
}

export interface NodeDetail {
  id: number;
  name: string;
  time_ns: number;
  mode: Mode;
  count: number;
  line: number;
  column: number;
  library: boolean;
  path: string;
  hidden_descendants: number;
  elided: ElidedEdge[];
}

export interface SourcePayload {
  language: string;
  text: string;
  line_count: number;
  line_to_nodes: Record<string, number[]>;
}

export interface HotspotRow {
  node_id: number;
  name: string;
  value_ns: number;
  line: number;
  path: string;
}

export interface EncodingPayload {
  mode_dash: Record<Mode, string>;
  fill_low: string;
  fill_high: string;
  diverging_negative: string;
  diverging_zero: string;
  diverging_positive: string;
  mode_change_border: string;
  unmatched_opacity: number;
  elided_highlight: string;
  node_radius: number;
  default_level_gap: number;
  default_sibling_gap: number;
}
