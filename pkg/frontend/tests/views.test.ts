import { describe, expect, it } from "vitest";

import { buildCodeLines, buildListRows, nodesForLine } from "../src/views.js";
import type { HotspotRow, SourcePayload } from "../src/types.js";
import { fixture } from "./load.js";

const hotspots = fixture<HotspotRow[]>("ex1_hotspots.json");
const source = fixture<SourcePayload>("ex1_source.json");

describe("list rows", () => {
  it("scales bars against the served maximum", () => {
    const rows = buildListRows(hotspots);
    expect(rows[0]!.fraction).toBe(1);
    for (const [i, row] of rows.entries()) {
      expect(row.fraction).toBeCloseTo(hotspots[i]!.value_ns / hotspots[0]!.value_ns, 12);
      expect(row.fraction).toBeGreaterThanOrEqual(0);
      expect(row.fraction).toBeLessThanOrEqual(1);
    }
  });

  it("handles an empty ranking", () => {
    expect(buildListRows([])).toEqual([]);
  });

  it("handles all-zero values without dividing by zero", () => {
    const zeros = hotspots.map((r) => ({ ...r, value_ns: 0 }));
    expect(buildListRows(zeros).every((r) => r.fraction === 0)).toBe(true);
  });
});

describe("code view", () => {
  it("splits the served text into numbered lines", () => {
    const lines = buildCodeLines(source, null);
    expect(lines).toHaveLength(source.line_count);
    expect(lines.map((l) => l.text).join("\n")).toBe(source.text);
    expect(lines[0]!.number).toBe(1);
  });

  it("attaches the served node ids per line", () => {
    const lines = buildCodeLines(source, null);
    for (const line of lines) {
      expect(line.nodeIds).toEqual(source.line_to_nodes[String(line.number)] ?? []);
    }
  });

  it("returns no nodes for a line without primitives, without error", () => {
    expect(nodesForLine(source, 9999)).toEqual([]);
    const sparse: SourcePayload = { ...source, line_to_nodes: {} };
    expect(buildCodeLines(sparse, null).every((l) => l.nodeIds.length === 0)).toBe(true);
  });

  it("marks exactly the active line", () => {
    const lines = buildCodeLines(source, 2);
    expect(lines.filter((l) => l.active).map((l) => l.number)).toEqual([2]);
    expect(buildCodeLines(source, null).every((l) => !l.active)).toBe(true);
  });
});
