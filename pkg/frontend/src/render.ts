// SVG/DOM rendering.  Every element that shows server data carries a
// data attribute so tests can assert on the rendered document.

import type { EmbeddingDoc, QuiverDoc, SigmaDoc } from "./api.js";
import { buildScene } from "./embed3d.js";
import type { Layout } from "./layout.js";
import { variableRows, type ViewState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl(doc: Document, tag: string, attrs: Record<string, string>): Element {
  const el = doc.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

function clear(el: Element): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

export function renderQuiver(
  doc: Document,
  host: Element,
  quiver: QuiverDoc,
  layout: Layout,
  selected: string | null,
  onVertexClick: (v: string) => void,
): void {
  clear(host);
  const w = 420;
  const h = 320;
  const svg = svgEl(doc, "svg", {
    viewBox: `0 0 ${w} ${h}`,
    width: String(w),
    height: String(h),
    class: "quiver-canvas",
  });
  const defs = svgEl(doc, "defs", {});
  const marker = svgEl(doc, "marker", {
    id: "arrowhead",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl(doc, "path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#555" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  // parallel arrows bend apart so multiplicities stay visible
  const seen = new Map<string, number>();
  for (const a of quiver.arrows) {
    const p = layout.get(a.source)!;
    const q = layout.get(a.target)!;
    const key = `${a.source}->${a.target}`;
    const idx = seen.get(key) ?? 0;
    seen.set(key, idx + 1);
    const dx = q.x - p.x;
    const dy = q.y - p.y;
    const len = Math.sqrt(dx * dx + dy * dy) || 1;
    const nx = -dy / len;
    const ny = dx / len;
    const bow = idx === 0 ? 0 : (idx % 2 === 1 ? 1 : -1) * 14 * Math.ceil(idx / 2);
    const sx = p.x + (dx * 16) / len;
    const sy = p.y + (dy * 16) / len;
    const ex = q.x - (dx * 18) / len;
    const ey = q.y - (dy * 18) / len;
    const cx = (sx + ex) / 2 + nx * bow;
    const cy = (sy + ey) / 2 + ny * bow;
    const path = svgEl(doc, "path", {
      d: `M ${sx} ${sy} Q ${cx} ${cy} ${ex} ${ey}`,
      fill: "none",
      stroke: "#555",
      "stroke-width": "1.6",
      "marker-end": "url(#arrowhead)",
      "data-arrow": a.id,
    });
    svg.appendChild(path);
  }

  for (const v of quiver.vertices) {
    const p = layout.get(v)!;
    const g = svgEl(doc, "g", {
      class: `vertex${selected === v ? " selected" : ""}`,
      "data-vertex": v,
    });
    g.appendChild(
      svgEl(doc, "circle", {
        cx: String(p.x),
        cy: String(p.y),
        r: "14",
        fill: selected === v ? "#ffd27f" : "#e8eefc",
        stroke: "#334",
        "stroke-width": "1.5",
      }),
    );
    const label = svgEl(doc, "text", {
      x: String(p.x),
      y: String(p.y + 4),
      "text-anchor": "middle",
      "font-size": "12",
    });
    label.textContent = v;
    g.appendChild(label);
    g.addEventListener("click", () => onVertexClick(v));
    svg.appendChild(g);
  }
  host.appendChild(svg);
}

export function renderVariables(doc: Document, host: Element, state: ViewState): void {
  clear(host);
  const list = doc.createElement("dl");
  list.className = "variables";
  for (const row of variableRows(state)) {
    const dt = doc.createElement("dt");
    dt.textContent = `x${row.vertex}`;
    const dd = doc.createElement("dd");
    dd.textContent = row.expression;
    dd.setAttribute("data-variable", row.vertex);
    list.appendChild(dt);
    list.appendChild(dd);
  }
  host.appendChild(list);
}

export function renderHistory(doc: Document, host: Element, state: ViewState): void {
  clear(host);
  const ol = doc.createElement("ol");
  ol.className = "history";
  for (const v of state.session?.history ?? []) {
    const li = doc.createElement("li");
    li.textContent = `mutate at ${v}`;
    ol.appendChild(li);
  }
  host.appendChild(ol);
}

export function renderOpBadge(doc: Document, host: Element, state: ViewState): void {
  clear(host);
  if (!state.opBadge) return;
  const span = doc.createElement("span");
  span.className = "badge";
  span.setAttribute("data-op-badge", "");
  span.textContent = state.opBadge.label;
  host.appendChild(span);
}

export function renderError(doc: Document, host: Element, state: ViewState): void {
  clear(host);
  if (!state.error) return;
  const div = doc.createElement("div");
  div.className = "error";
  div.setAttribute("data-error", "");
  div.textContent = state.error;
  host.appendChild(div);
}

export function renderSigmaTable(doc: Document, host: Element, sigma: SigmaDoc | null): void {
  clear(host);
  if (!sigma) return;
  const table = doc.createElement("table");
  table.className = "sigma";
  const head = doc.createElement("tr");
  for (const caption of ["vertex", "depth j", "sigma(0, vertex)"]) {
    const th = doc.createElement("th");
    th.textContent = caption;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const entry of sigma.sigma.rule) {
    const tr = doc.createElement("tr");
    tr.setAttribute("data-sigma-vertex", entry.vertex);
    const cells = [
      entry.vertex,
      String(entry.j),
      `(${-entry.j}, ${entry.image_vertex})`,
    ];
    for (const text of cells) {
      const td = doc.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  host.appendChild(table);
}

export function renderEmbedding(
  doc: Document,
  host: Element,
  embedding: EmbeddingDoc | null,
  sigma: SigmaDoc | null,
  yaw: number,
): void {
  clear(host);
  if (!embedding) {
    const div = doc.createElement("div");
    div.setAttribute("data-embedding-absent", "");
    div.textContent = "no opposite slice found for this quiver";
    host.appendChild(div);
    return;
  }
  const w = 460;
  const h = 340;
  const scene = buildScene(embedding, sigma ? sigma.sigma.rule : null, w, h, yaw);
  const svg = svgEl(doc, "svg", {
    viewBox: `0 0 ${w} ${h}`,
    width: String(w),
    height: String(h),
    class: "embedding-canvas",
  });
  svg.appendChild(
    svgEl(doc, "line", {
      x1: String(scene.planeY0.x1),
      y1: String(scene.planeY0.y1),
      x2: String(scene.planeY0.x2),
      y2: String(scene.planeY0.y2),
      stroke: "#b66",
      "stroke-dasharray": "6 4",
      "data-plane": "y0",
    }),
  );
  const byKey = new Map(scene.points.map((p) => [p.key, p]));
  for (const seg of scene.segments) {
    const a = byKey.get(seg.from);
    const b = byKey.get(seg.to);
    if (!a || !b) continue;
    svg.appendChild(
      svgEl(doc, "line", {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        stroke: "#9ab",
        "stroke-width": "1",
      }),
    );
  }
  for (const p of scene.points) {
    const c = svgEl(doc, "circle", {
      cx: String(p.x),
      cy: String(p.y),
      r: "6",
      fill: p.world[1] >= 0 ? "#4a7" : "#47a",
      "data-point": p.key,
      "data-plane-y": String(p.world[1]),
    });
    if (p.mirrorKey) c.setAttribute("data-mirror", p.mirrorKey);
    c.addEventListener("mouseenter", () => {
      if (!p.mirrorKey) return;
      const twin = svg.querySelector(`[data-point="${p.mirrorKey}"]`);
      if (twin) twin.setAttribute("data-highlight", "true");
    });
    c.addEventListener("mouseleave", () => {
      for (const el of Array.from(svg.querySelectorAll("[data-highlight]"))) {
        el.removeAttribute("data-highlight");
      }
    });
    svg.appendChild(c);
  }
  host.appendChild(svg);
}
