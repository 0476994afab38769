// UI state and its transitions. Everything is immutable and pure so
// "toggle twice restores the scene" is checkable by deep equality.

import type { Metric, TreePayload } from "./types.js";

export interface Transform {
  x: number;
  y: number;
  k: number;
}

export interface UIState {
  runA: string | null;
  runB: string | null;
  metric: Metric;
  // null until a payload arrives: the server decides the default set
  collapsed: number[] | null;
  hovered: number | null;
  libraryEdges: boolean;
  transform: Transform;
}

export const MIN_ZOOM = 0.2;
export const MAX_ZOOM = 8;

export function initialState(): UIState {
  return {
    runA: null,
    runB: null,
    metric: "inclusive",
    collapsed: null,
    hovered: null,
    libraryEdges: false,
    transform: { x: 0, y: 0, k: 1 },
  };
}

export function comparisonEnabled(s: UIState): boolean {
  return s.runA !== null && s.runB !== null && s.runA !== s.runB;
}

export function selectRun(s: UIState, runId: string): UIState {
  if (runId === s.runA) return s;
  return {
    ...s,
    runA: runId,
    runB: s.runB === runId ? null : s.runB,
    collapsed: null,
    hovered: null,
    transform: { x: 0, y: 0, k: 1 },
  };
}

export function selectComparison(s: UIState, runId: string | null): UIState {
  const runB = runId === s.runA ? null : runId;
  return runB === s.runB ? s : { ...s, runB, hovered: null };
}

export function toggleMetric(s: UIState): UIState {
  return { ...s, metric: s.metric === "inclusive" ? "exclusive" : "inclusive" };
}

export function toggleLibraryEdges(s: UIState): UIState {
  return { ...s, libraryEdges: !s.libraryEdges };
}

export function toggleCollapse(s: UIState, nodeId: number): UIState {
  const current = s.collapsed ?? [];
  const collapsed = current.includes(nodeId)
    ? current.filter((id) => id !== nodeId)
    : [...current, nodeId].sort((a, b) => a - b);
  return { ...s, collapsed };
}

export function hoverNode(s: UIState, nodeId: number, payload: TreePayload): UIState {
  // invariant: the hovered node is always currently visible
  if (!payload.nodes.some((n) => n.id === nodeId)) return s;
  return s.hovered === nodeId ? s : { ...s, hovered: nodeId };
}

export function clearHover(s: UIState): UIState {
  return s.hovered === null ? s : { ...s, hovered: null };
}

/** Adopt a freshly fetched payload: the server's collapse set becomes
 * canonical and a hover on a no-longer-visible node is dropped. */
export function reconcile(s: UIState, payload: TreePayload): UIState {
  const hovered =
    s.hovered !== null && payload.nodes.some((n) => n.id === s.hovered)
      ? s.hovered
      : null;
  return { ...s, collapsed: [...payload.collapsed], hovered };
}

export function panBy(s: UIState, dx: number, dy: number): UIState {
  const t = s.transform;
  return { ...s, transform: { x: t.x + dx, y: t.y + dy, k: t.k } };
}

/** Zoom by `factor` keeping the screen point (cx, cy) fixed. */
export function zoomAt(s: UIState, cx: number, cy: number, factor: number): UIState {
  const t = s.transform;
  const k = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, t.k * factor));
  if (k === t.k) return s;
  const wx = (cx - t.x) / t.k;
  const wy = (cy - t.y) / t.k;
  return { ...s, transform: { x: cx - wx * k, y: cy - wy * k, k } };
}
