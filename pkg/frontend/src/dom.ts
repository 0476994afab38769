// Browser bindings: draw a Scene into SVG and keep the side panels in
// step. No analysis happens here; everything drawable arrives in the
// Scene, list rows, or code lines.

import type { Scene, Mark } from "./scene.js";
import type { Transform } from "./state.js";
import type { CodeLine, ListRow } from "./views.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const NODE_RADIUS = 7;

export interface TreeRefs {
  svg: SVGSVGElement;
  viewport: SVGGElement;
  links: SVGGElement;
  overlays: SVGGElement;
  marks: SVGGElement;
  banner: HTMLElement;
  legend: HTMLElement;
  tooltip: HTMLElement;
}

export function setupTree(svg: SVGSVGElement, banner: HTMLElement,
                          legend: HTMLElement, tooltip: HTMLElement): TreeRefs {
  const viewport = document.createElementNS(SVG_NS, "g");
  const links = document.createElementNS(SVG_NS, "g");
  const overlays = document.createElementNS(SVG_NS, "g");
  const marks = document.createElementNS(SVG_NS, "g");
  viewport.append(links, overlays, marks);
  svg.append(viewport);
  return { svg, viewport, links, overlays, marks, banner, legend, tooltip };
}

export function applyTransform(refs: TreeRefs, t: Transform): void {
  refs.viewport.setAttribute("transform", `translate(${t.x} ${t.y}) scale(${t.k})`);
}

function markElement(mark: Mark): SVGElement {
  let el: SVGElement;
  if (mark.shape === "triangle") {
    el = document.createElementNS(SVG_NS, "path");
    const r = NODE_RADIUS;
    el.setAttribute("d", `M${mark.x + r} ${mark.y} L${mark.x - r} ${mark.y - r} ` +
      `L${mark.x - r} ${mark.y + r} Z`);
  } else {
    el = document.createElementNS(SVG_NS, "circle");
    el.setAttribute("cx", String(mark.x));
    el.setAttribute("cy", String(mark.y));
    el.setAttribute("r", String(NODE_RADIUS));
  }
  el.classList.add("node", `shape-${mark.shape}`);
  if (mark.hovered) el.classList.add("hovered");
  el.dataset.id = String(mark.id);
  el.setAttribute("fill", mark.fill);
  el.setAttribute("stroke", mark.stroke);
  el.setAttribute("stroke-width", String(mark.strokeWidth));
  if (mark.dash) el.setAttribute("stroke-dasharray", mark.dash);
  if (mark.opacity !== 1) el.setAttribute("opacity", String(mark.opacity));
  return el;
}

export function renderScene(refs: TreeRefs, scene: Scene): void {
  refs.banner.textContent = scene.banner ?? "";
  refs.banner.hidden = scene.banner === null;

  refs.links.replaceChildren(...scene.links.map((l) => {
    const path = document.createElementNS(SVG_NS, "path");
    const mx = (l.x1 + l.x2) / 2;
    path.setAttribute("d", `M${l.x1} ${l.y1} C${mx} ${l.y1} ${mx} ${l.y2} ${l.x2} ${l.y2}`);
    path.classList.add("edge");
    return path;
  }));

  refs.overlays.replaceChildren(...scene.overlays.map((o) => {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(o.x1));
    line.setAttribute("y1", String(o.y1));
    line.setAttribute("x2", String(o.x2));
    line.setAttribute("y2", String(o.y2));
    line.setAttribute("stroke", o.color);
    line.classList.add("elided-overlay");
    return line;
  }));

  refs.marks.replaceChildren(...scene.marks.map((mark) => {
    const group = document.createElementNS(SVG_NS, "g");
    const el = markElement(mark);
    const label = document.createElementNS(SVG_NS, "text");
    label.classList.add("label");
    label.setAttribute("x", String(mark.x + NODE_RADIUS + 4));
    label.setAttribute("y", String(mark.y + 4));
    label.textContent = mark.name;
    group.append(el, label);
    return group;
  }));

  renderLegend(refs.legend, scene);
}

function renderLegend(el: HTMLElement, scene: Scene): void {
  el.replaceChildren(...scene.legend.map((item) => {
    const row = document.createElement("div");
    row.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = `legend-swatch legend-${item.kind}`;
    if (item.kind === "fill" || item.kind === "border") {
      swatch.style.setProperty("--swatch-color", item.value);
    } else if (item.kind === "stroke") {
      swatch.style.setProperty("--swatch-dash", item.value || "none");
      const line = document.createElementNS(SVG_NS, "svg");
      line.setAttribute("viewBox", "0 0 28 8");
      const stroke = document.createElementNS(SVG_NS, "line");
      stroke.setAttribute("x1", "0");
      stroke.setAttribute("y1", "4");
      stroke.setAttribute("x2", "28");
      stroke.setAttribute("y2", "4");
      stroke.setAttribute("stroke", "#333");
      if (item.value) stroke.setAttribute("stroke-dasharray", item.value);
      line.append(stroke);
      swatch.append(line);
    } else if (item.kind === "opacity") {
      swatch.style.opacity = item.value;
    }
    const label = document.createElement("span");
    label.textContent = item.label;
    row.append(swatch, label);
    return row;
  }));
}

export function showTooltip(refs: TreeRefs, lines: string[], clientX: number,
                            clientY: number): void {
  refs.tooltip.replaceChildren(...lines.map((text) => {
    const div = document.createElement("div");
    div.textContent = text;
    return div;
  }));
  refs.tooltip.hidden = false;
  const host = refs.svg.closest(".tree-panel") as HTMLElement | null;
  const bounds = host?.getBoundingClientRect();
  refs.tooltip.style.left = `${clientX - (bounds?.left ?? 0) + 12}px`;
  refs.tooltip.style.top = `${clientY - (bounds?.top ?? 0) + 12}px`;
}

export function hideTooltip(refs: TreeRefs): void {
  refs.tooltip.hidden = true;
  refs.tooltip.replaceChildren();
}

export function flashMarks(refs: TreeRefs, ids: number[]): void {
  const wanted = new Set(ids.map(String));
  refs.marks.querySelectorAll<SVGElement>(".node").forEach((el) => {
    el.classList.toggle("flash", wanted.has(el.dataset.id ?? ""));
  });
}

export function renderList(el: HTMLElement, rows: ListRow[],
                           onClick: (row: ListRow) => void): void {
  el.replaceChildren(...rows.map((row) => {
    const item = document.createElement("div");
    item.className = "list-row";
    item.title = row.path;
    const bar = document.createElement("span");
    bar.className = "list-bar";
    bar.style.width = `${(row.fraction * 100).toFixed(1)}%`;
    const name = document.createElement("span");
    name.className = "list-name";
    name.textContent = row.name;
    const value = document.createElement("span");
    value.className = "list-value";
    value.textContent = `${row.valueNs} ns`;
    item.append(bar, name, value);
    item.addEventListener("click", () => onClick(row));
    return item;
  }));
}

export function renderCode(el: HTMLElement, lines: CodeLine[],
                           onLineClick: (line: CodeLine) => void): void {
  el.replaceChildren(...lines.map((line) => {
    const row = document.createElement("div");
    row.className = "code-line";
    if (line.active) row.classList.add("active");
    const num = document.createElement("span");
    num.className = "code-num";
    num.textContent = String(line.number);
    const text = document.createElement("span");
    text.className = "code-text";
    text.textContent = line.text;
    row.append(num, text);
    row.addEventListener("click", () => onLineClick(line));
    return row;
  }));
  const active = el.querySelector(".code-line.active");
  if (active) active.scrollIntoView({ block: "nearest" });
}

export function downloadBlob(blob: Blob, filename: string): void {
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
