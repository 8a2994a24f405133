// Client-side quiver layout.  Force-directed with deterministic
// iteration count, optionally pinned to horizontal layers when the
// service reports slice depths (mirroring the embedding planes).
// Purely cosmetic; positions never feed back into any computation.

import type { QuiverDoc } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

export type Layout = Map<string, Point>;

export function circularLayout(q: QuiverDoc, w: number, h: number): Layout {
  const out: Layout = new Map();
  const n = q.vertices.length;
  const r = Math.min(w, h) / 2 - 40;
  q.vertices.forEach((v, i) => {
    const angle = (2 * Math.PI * i) / Math.max(n, 1) - Math.PI / 2;
    out.set(v, {
      x: w / 2 + r * Math.cos(angle),
      y: h / 2 + r * Math.sin(angle),
    });
  });
  return out;
}

export function forceLayout(
  q: QuiverDoc,
  w: number,
  h: number,
  iterations = 120,
): Layout {
  const pos = circularLayout(q, w, h);
  const verts = q.vertices;
  if (verts.length <= 2) return pos;
  const edges = q.arrows.map((a) => [a.source, a.target] as const);
  const ideal = Math.min(w, h) / 2.2;
  for (let it = 0; it < iterations; it++) {
    const force: Layout = new Map(verts.map((v) => [v, { x: 0, y: 0 }]));
    for (let i = 0; i < verts.length; i++) {
      for (let j = i + 1; j < verts.length; j++) {
        const a = pos.get(verts[i])!;
        const b = pos.get(verts[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const push = (ideal * ideal) / d2 / 2;
        const fa = force.get(verts[i])!;
        const fb = force.get(verts[j])!;
        fa.x += dx * push * 0.01;
        fa.y += dy * push * 0.01;
        fb.x -= dx * push * 0.01;
        fb.y -= dy * push * 0.01;
      }
    }
    for (const [s, t] of edges) {
      const a = pos.get(s)!;
      const b = pos.get(t)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.sqrt(dx * dx + dy * dy) || 1;
      const pull = (d - ideal) * 0.005;
      const fa = force.get(s)!;
      const fb = force.get(t)!;
      fa.x += dx * pull;
      fa.y += dy * pull;
      fb.x -= dx * pull;
      fb.y -= dy * pull;
    }
    for (const v of verts) {
      const p = pos.get(v)!;
      const f = force.get(v)!;
      p.x = Math.min(w - 30, Math.max(30, p.x + f.x));
      p.y = Math.min(h - 30, Math.max(30, p.y + f.y));
    }
  }
  return pos;
}

export function layeredLayout(
  q: QuiverDoc,
  depths: Record<string, number>,
  w: number,
  h: number,
): Layout {
  const out: Layout = new Map();
  const maxDepth = Math.max(...Object.values(depths), 0);
  const byLayer = new Map<number, string[]>();
  for (const v of q.vertices) {
    const d = depths[v] ?? 0;
    if (!byLayer.has(d)) byLayer.set(d, []);
    byLayer.get(d)!.push(v);
  }
  for (const [d, vs] of byLayer) {
    const y = maxDepth === 0 ? h / 2 : 40 + ((h - 80) * d) / maxDepth;
    vs.forEach((v, i) => {
      out.set(v, { x: ((i + 1) * w) / (vs.length + 1), y });
    });
  }
  return out;
}
