// Scene construction: pure translation of server payloads into
// drawable marks. All numbers come from payload fields; the only
// client-side arithmetic is color interpolation of the served
// `encoded` scalar, kept identical to the server's SVG renderer.

import type {
  EncodingPayload,
  Metric,
  NodeDetail,
  TreeNodePayload,
  TreePayload,
} from "./types.js";
import type { UIState } from "./state.js";

export interface Mark {
  id: number;
  shape: "circle" | "triangle";
  x: number;
  y: number;
  name: string;
  fill: string;
  stroke: string;
  strokeWidth: number;
  dash: string;
  opacity: number;
  hovered: boolean;
  tooltip: string[];
  line: number;
  hiddenDescendants: number;
}

export interface Link {
  source: number;
  target: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface Overlay {
  from: number;
  to: number;
  kind: string;
  color: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface LegendItem {
  kind: "stroke" | "fill" | "border" | "opacity" | "shape";
  label: string;
  value: string;
}

export interface Scene {
  runId: string;
  metric: Metric;
  comparing: boolean;
  slower: string | null;
  marks: Mark[];
  links: Link[];
  overlays: Overlay[];
  legend: LegendItem[];
  banner: string | null;
}

function hexChannel(hex: string, i: number): number {
  return parseInt(hex.slice(1 + 2 * i, 3 + 2 * i), 16);
}

// round-half-even, matching the server renderer's rounding
function roundEven(x: number): number {
  const floor = Math.floor(x);
  const diff = x - floor;
  if (diff > 0.5) return floor + 1;
  if (diff < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

export function mixColor(low: string, high: string, t: number): string {
  let out = "#";
  for (let i = 0; i < 3; i++) {
    const lo = hexChannel(low, i);
    const hi = hexChannel(high, i);
    out += roundEven(lo + (hi - lo) * t).toString(16).padStart(2, "0");
  }
  return out;
}

export function fillFor(node: TreeNodePayload, enc: EncodingPayload, comparing: boolean): string {
  const t = node.encoded;
  if (!comparing) return mixColor(enc.fill_low, enc.fill_high, t);
  if (t >= 0) return mixColor(enc.diverging_zero, enc.diverging_positive, t);
  return mixColor(enc.diverging_zero, enc.diverging_negative, -t);
}

export function tooltipFor(node: TreeNodePayload, comparing: boolean): string[] {
  const lines = [
    `${node.name}: ${node.value_ns} ns (${node.mode})`,
    `count ${node.count}`,
    node.path,
  ];
  if (node.hidden_descendants) lines.push(`hides ${node.hidden_descendants} nodes`);
  if (comparing) {
    if (node.unmatched) {
      lines.push("unmatched");
    } else {
      const delta = node.delta_ns ?? 0;
      lines.push(`delta ${delta >= 0 ? "+" : ""}${delta} ns`);
      if (node.mode_changed) lines.push(`mode now ${node.mode_b}`);
    }
  }
  return lines;
}

function buildLegend(enc: EncodingPayload, comparing: boolean): LegendItem[] {
  const items: LegendItem[] = [
    { kind: "stroke", label: "sync", value: enc.mode_dash.sync },
    { kind: "stroke", label: "async", value: enc.mode_dash.async },
    { kind: "stroke", label: "undecided", value: enc.mode_dash.undecided },
    { kind: "shape", label: "collapsed subtree", value: "triangle" },
  ];
  if (comparing) {
    items.push(
      { kind: "fill", label: "slower here", value: enc.diverging_positive },
      { kind: "fill", label: "faster here", value: enc.diverging_negative },
      { kind: "border", label: "mode changed", value: enc.mode_change_border },
      { kind: "opacity", label: "unmatched", value: String(enc.unmatched_opacity) },
    );
  } else {
    items.push(
      { kind: "fill", label: "low time", value: enc.fill_low },
      { kind: "fill", label: "high time", value: enc.fill_high },
    );
  }
  return items;
}

function malformed(payload: unknown): string | null {
  if (typeof payload !== "object" || payload === null) return "no tree payload";
  const p = payload as Partial<TreePayload>;
  if (!Array.isArray(p.nodes) || !Array.isArray(p.edges)) {
    return "tree payload is missing its nodes or edges";
  }
  for (const n of p.nodes) {
    if (typeof n.id !== "number" || typeof n.x !== "number" || typeof n.y !== "number") {
      return "tree payload has a node without id or coordinates";
    }
  }
  return null;
}

export function buildScene(
  payload: TreePayload,
  enc: EncodingPayload,
  state: UIState,
  detail: NodeDetail | null = null,
): Scene {
  const problem = malformed(payload);
  if (problem !== null) {
    return {
      runId: "",
      metric: state.metric,
      comparing: false,
      slower: null,
      marks: [],
      links: [],
      overlays: [],
      legend: buildLegend(enc, false),
      banner: problem,
    };
  }

  const comparing = payload.compare_with !== null;
  const position = new Map(payload.nodes.map((n) => [n.id, { x: n.x, y: n.y }]));

  const marks: Mark[] = payload.nodes.map((n) => {
    const changed = comparing && n.mode_changed === true;
    return {
      id: n.id,
      shape: n.mark,
      x: n.x,
      y: n.y,
      name: n.name,
      fill: fillFor(n, enc, comparing),
      stroke: changed ? enc.mode_change_border : "#333333",
      strokeWidth: changed ? 2.5 : 1.5,
      dash: enc.mode_dash[n.mode],
      opacity: comparing && n.unmatched ? enc.unmatched_opacity : 1,
      hovered: state.hovered === n.id,
      tooltip: tooltipFor(n, comparing),
      line: n.line,
      hiddenDescendants: n.hidden_descendants,
    };
  });

  const links: Link[] = payload.edges.flatMap((e) => {
    const a = position.get(e.source);
    const b = position.get(e.target);
    if (!a || !b) return [];
    return [{ source: e.source, target: e.target, x1: a.x, y1: a.y, x2: b.x, y2: b.y }];
  });

  // the yellow on-demand edges for the hovered node; the server already
  // applied the library filter when the detail was fetched
  const overlays: Overlay[] = [];
  if (state.hovered !== null && detail !== null && detail.id === state.hovered) {
    const at = position.get(detail.id);
    for (const edge of detail.elided) {
      const peer = position.get(edge.peer);
      if (!at || !peer) continue;
      overlays.push({
        from: detail.id,
        to: edge.peer,
        kind: edge.kind,
        color: enc.elided_highlight,
        x1: at.x,
        y1: at.y,
        x2: peer.x,
        y2: peer.y,
      });
    }
  }

  return {
    runId: payload.run_id,
    metric: payload.metric,
    comparing,
    slower: payload.comparison?.slower ?? null,
    marks,
    links,
    overlays,
    legend: buildLegend(enc, comparing),
    banner: null,
  };
}
