// List and code view models. Rows and lines carry served values only;
// bar widths are fractions of the served maximum.

import type { HotspotRow, SourcePayload } from "./types.js";

export interface ListRow {
  nodeId: number;
  name: string;
  valueNs: number;
  line: number;
  path: string;
  fraction: number;
}

export function buildListRows(rows: HotspotRow[]): ListRow[] {
  const max = rows.reduce((m, r) => Math.max(m, r.value_ns), 0);
  return rows.map((r) => ({
    nodeId: r.node_id,
    name: r.name,
    valueNs: r.value_ns,
    line: r.line,
    path: r.path,
    fraction: max > 0 ? r.value_ns / max : 0,
  }));
}

export interface CodeLine {
  number: number;
  text: string;
  nodeIds: number[];
  active: boolean;
}

/** Node ids on a source line, straight from the served map; lines
 * without primitives yield an empty list rather than an error. */
export function nodesForLine(source: SourcePayload, line: number): number[] {
  return source.line_to_nodes[String(line)] ?? [];
}

export function buildCodeLines(source: SourcePayload, activeLine: number | null): CodeLine[] {
  return source.text.split("\n").map((text, i) => ({
    number: i + 1,
    text,
    nodeIds: nodesForLine(source, i + 1),
    active: activeLine === i + 1,
  }));
}
