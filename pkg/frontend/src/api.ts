// Thin API client. Responses are used verbatim; the only client-side
// logic is discarding answers that a newer request has overtaken.

import { comparisonEnabled, type UIState } from "./state.js";

export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}

export type FetchLike = (url: string) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`api ${status}: ${detail}`);
  }
}

export class ApiClient {
  private latest = new Map<string, number>();

  constructor(private fetchFn: FetchLike, readonly base: string = "") {}

  /** GET `path`; resolves null when a later get() on the same channel
   * was issued before this response landed (stale-response discard). */
  async get<T>(channel: string, path: string): Promise<T | null> {
    const seq = (this.latest.get(channel) ?? 0) + 1;
    this.latest.set(channel, seq);
    const resp = await this.fetchFn(this.base + path);
    if (this.latest.get(channel) !== seq) return null;
    if (!resp.ok) throw new ApiError(resp.status, await resp.text());
    const body = (await resp.json()) as T;
    if (this.latest.get(channel) !== seq) return null;
    return body;
  }
}

export function runsUrl(): string {
  return "/api/runs";
}

export function encodingUrl(): string {
  return "/api/encoding";
}

export function treeUrl(s: UIState): string {
  if (s.runA === null) throw new Error("no run selected");
  const params = new URLSearchParams();
  params.set("metric", s.metric);
  if (s.collapsed !== null) params.set("collapsed", s.collapsed.join(","));
  if (comparisonEnabled(s)) params.set("compare", s.runB as string);
  return `/api/runs/${encodeURIComponent(s.runA)}/tree?${params.toString()}`;
}

export function nodeUrl(s: UIState, nodeId: number): string {
  if (s.runA === null) throw new Error("no run selected");
  const lib = s.libraryEdges ? 1 : 0;
  return `/api/runs/${encodeURIComponent(s.runA)}/node/${nodeId}?library=${lib}`;
}

export function sourceUrl(s: UIState): string {
  if (s.runA === null) throw new Error("no run selected");
  return `/api/runs/${encodeURIComponent(s.runA)}/source`;
}

export function hotspotsUrl(s: UIState, n = 25): string {
  if (s.runA === null) throw new Error("no run selected");
  return `/api/runs/${encodeURIComponent(s.runA)}/hotspots?metric=${s.metric}&n=${n}`;
}

/** The export button downloads this endpoint's bytes unchanged, so the
 * saved file is identical to the command-line rendering. */
export function exportUrl(s: UIState): string {
  if (s.runA === null) throw new Error("no run selected");
  return `/api/runs/${encodeURIComponent(s.runA)}/render`;
}
