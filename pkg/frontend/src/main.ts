// Application wiring: one UIState, one in-flight view of the API, and
// re-render on every transition. Single-threaded by construction; the
// ApiClient drops any response that a newer request has overtaken.

import { ApiClient, ApiError, encodingUrl, exportUrl, hotspotsUrl, nodeUrl,
         runsUrl, sourceUrl, treeUrl } from "./api.js";
import { applyTransform, downloadBlob, flashMarks, hideTooltip, renderCode,
         renderList, renderScene, setupTree, showTooltip, type TreeRefs } from "./dom.js";
import { buildScene } from "./scene.js";
import { clearHover, comparisonEnabled, hoverNode, initialState, panBy,
         reconcile, selectComparison, selectRun, toggleCollapse,
         toggleLibraryEdges, toggleMetric, zoomAt, type UIState } from "./state.js";
import type { EncodingPayload, HotspotRow, NodeDetail, RunSummary,
              SourcePayload, TreePayload } from "./types.js";
import { buildCodeLines, buildListRows, nodesForLine } from "./views.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

class App {
  state: UIState = initialState();
  client = new ApiClient((url) => fetch(url));
  encoding: EncodingPayload | null = null;
  payload: TreePayload | null = null;
  detail: NodeDetail | null = null;
  source: SourcePayload | null = null;
  hotspots: HotspotRow[] = [];
  refs: TreeRefs;

  runSelect = el<HTMLSelectElement>("run-select");
  compareSelect = el<HTMLSelectElement>("compare-select");
  metricButton = el<HTMLButtonElement>("metric-toggle");
  libraryCheck = el<HTMLInputElement>("library-toggle");
  exportButton = el<HTMLButtonElement>("export-svg");
  comparisonInfo = el<HTMLElement>("comparison-info");
  listView = el<HTMLElement>("list-view");
  codeView = el<HTMLElement>("code-view");
  errorBox = el<HTMLElement>("error-box");

  constructor() {
    this.refs = setupTree(
      document.getElementById("tree-svg") as unknown as SVGSVGElement,
      el("banner"), el("legend"), el("tooltip"));
    this.bindControls();
    this.bindCanvas();
  }

  async start(): Promise<void> {
    try {
      this.encoding = await this.client.get<EncodingPayload>("encoding", encodingUrl());
      const runs = await this.client.get<RunSummary[]>("runs", runsUrl());
      if (!runs || runs.length === 0) {
        this.fail("no runs on the server");
        return;
      }
      this.populateRunSelectors(runs);
      const first = runs[0];
      if (first) await this.transition(selectRun(this.state, first.run_id));
    } catch (err) {
      this.fail(err);
    }
  }

  private populateRunSelectors(runs: RunSummary[]): void {
    this.runSelect.replaceChildren(...runs.map((r) => new Option(r.run_id, r.run_id)));
    this.compareSelect.replaceChildren(
      new Option("(no comparison)", ""),
      ...runs.map((r) => new Option(r.run_id, r.run_id)));
  }

  private bindControls(): void {
    this.runSelect.addEventListener("change", () => {
      void this.transition(selectRun(this.state, this.runSelect.value));
    });
    this.compareSelect.addEventListener("change", () => {
      void this.transition(selectComparison(this.state, this.compareSelect.value || null));
    });
    this.metricButton.addEventListener("click", () => {
      void this.transition(toggleMetric(this.state));
    });
    this.libraryCheck.addEventListener("change", () => {
      void this.transition(toggleLibraryEdges(this.state));
    });
    this.exportButton.addEventListener("click", () => {
      void this.exportSvg();
    });
  }

  private bindCanvas(): void {
    const svg = this.refs.svg;
    svg.addEventListener("wheel", (e) => {
      e.preventDefault();
      const factor = e.deltaY < 0 ? 1.2 : 1 / 1.2;
      this.state = zoomAt(this.state, e.offsetX, e.offsetY, factor);
      applyTransform(this.refs, this.state.transform);
    }, { passive: false });

    let dragging: { x: number; y: number } | null = null;
    svg.addEventListener("pointerdown", (e) => {
      dragging = { x: e.clientX, y: e.clientY };
      svg.setPointerCapture(e.pointerId);
    });
    svg.addEventListener("pointermove", (e) => {
      if (!dragging) return;
      this.state = panBy(this.state, e.clientX - dragging.x, e.clientY - dragging.y);
      dragging = { x: e.clientX, y: e.clientY };
      applyTransform(this.refs, this.state.transform);
    });
    svg.addEventListener("pointerup", () => { dragging = null; });

    svg.addEventListener("pointerover", (e) => {
      const id = this.markId(e.target);
      if (id !== null) void this.hover(id, e.clientX, e.clientY);
    });
    svg.addEventListener("pointerout", (e) => {
      if (this.markId(e.target) !== null) this.unhover();
    });
    svg.addEventListener("click", (e) => {
      const id = this.markId(e.target);
      if (id !== null) void this.transition(toggleCollapse(this.state, id));
    });
  }

  private markId(target: EventTarget | null): number | null {
    if (!(target instanceof Element)) return null;
    const node = target.closest(".node");
    if (!(node instanceof SVGElement) || node.dataset.id === undefined) return null;
    return Number(node.dataset.id);
  }

  /** Apply a state transition, refetching whatever it invalidated. */
  private async transition(next: UIState): Promise<void> {
    const prev = this.state;
    if (next === prev) return;
    this.state = next;
    try {
      if (next.runA !== prev.runA) {
        this.source = next.runA === null ? null
          : await this.client.get<SourcePayload>("source", sourceUrl(next)).catch(
            (err) => err instanceof ApiError && err.status === 404 ? null : Promise.reject(err));
      }
      const treeStale = next.runA !== prev.runA || next.runB !== prev.runB
        || next.metric !== prev.metric || next.collapsed !== prev.collapsed;
      if (treeStale && next.runA !== null) {
        const payload = await this.client.get<TreePayload>("tree", treeUrl(next));
        if (payload === null) return;                      // a newer request won
        this.payload = payload;
        this.state = reconcile(this.state, payload);
        this.hotspots = await this.client.get<HotspotRow[]>(
          "hotspots", hotspotsUrl(next)) ?? this.hotspots;
      }
      if (next.libraryEdges !== prev.libraryEdges && this.state.hovered !== null) {
        this.detail = await this.client.get<NodeDetail>(
          "node", nodeUrl(this.state, this.state.hovered));
      }
      this.errorBox.hidden = true;
      this.redraw();
    } catch (err) {
      this.fail(err);
    }
  }

  private async hover(id: number, clientX: number, clientY: number): Promise<void> {
    if (this.payload === null) return;
    const next = hoverNode(this.state, id, this.payload);
    if (next === this.state) return;
    this.state = next;
    this.redraw();
    try {
      const detail = await this.client.get<NodeDetail>("node", nodeUrl(this.state, id));
      if (detail === null || this.state.hovered !== id) return;
      this.detail = detail;
      const mark = buildScene(this.payload, this.encoding!, this.state, detail)
        .marks.find((m) => m.id === id);
      if (mark) showTooltip(this.refs, mark.tooltip, clientX, clientY);
      this.redraw();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Remove every hover artifact: overlay, tooltip, code highlight. */
  private unhover(): void {
    this.detail = null;
    this.state = clearHover(this.state);
    hideTooltip(this.refs);
    this.redraw();
  }

  private redraw(): void {
    if (this.payload === null || this.encoding === null) return;
    const scene = buildScene(this.payload, this.encoding, this.state, this.detail);
    renderScene(this.refs, scene);
    applyTransform(this.refs, this.state.transform);

    this.comparisonInfo.hidden = !comparisonEnabled(this.state);
    if (scene.comparing && this.payload.comparison) {
      const c = this.payload.comparison;
      this.comparisonInfo.textContent = c.slower === null
        ? `vs ${c.run_b}: tie (${c.totals.run_a} ns)`
        : `vs ${c.run_b}: slower is ${c.slower} ` +
          `(${c.totals.run_a} ns vs ${c.totals.run_b} ns)`;
    }
    this.metricButton.textContent = `metric: ${this.state.metric}`;

    renderList(this.listView, buildListRows(this.hotspots), (row) => {
      this.focusNode(row.nodeId);
    });

    if (this.source !== null) {
      const hoveredNode = this.payload.nodes.find((n) => n.id === this.state.hovered);
      const lines = buildCodeLines(this.source, hoveredNode?.line ?? null);
      renderCode(this.codeView, lines, (line) => {
        flashMarks(this.refs, nodesForLine(this.source!, line.number));
      });
    } else {
      this.codeView.replaceChildren();
    }
  }

  /** Centre the viewport on a node and flash it (list-to-tree link). */
  private focusNode(id: number): void {
    const node = this.payload?.nodes.find((n) => n.id === id);
    if (!node) return;                    // hidden under a collapse: nothing to focus
    const box = this.refs.svg.getBoundingClientRect();
    const k = this.state.transform.k;
    this.state = {
      ...this.state,
      transform: { x: box.width / 2 - node.x * k, y: box.height / 2 - node.y * k, k },
    };
    applyTransform(this.refs, this.state.transform);
    flashMarks(this.refs, [id]);
  }

  private async exportSvg(): Promise<void> {
    try {
      const resp = await fetch(exportUrl(this.state));
      if (!resp.ok) throw new ApiError(resp.status, await resp.text());
      downloadBlob(await resp.blob(), `${this.state.runA}.svg`);
    } catch (err) {
      this.fail(err);
    }
  }

  private fail(err: unknown): void {
    this.errorBox.textContent = err instanceof Error ? err.message : String(err);
    this.errorBox.hidden = false;
  }
}

new App().start();
