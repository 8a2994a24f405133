// Projection of the exact-rational embedding JSON to screen space.
// Rationals are parsed to floats for display only; the exact values
// never leave the service.

import type { EmbeddingDoc, EmbeddingPointDoc } from "./api.js";

export function parseRational(text: string): number {
  const [p, q] = text.split("/");
  return q === undefined ? Number(p) : Number(p) / Number(q);
}

export interface ProjectedPoint {
  key: string; // "m:vertex"
  m: number;
  vertex: string;
  world: [number, number, number];
  x: number;
  y: number;
  mirrorKey: string | null;
}

export interface ProjectedScene {
  points: ProjectedPoint[];
  segments: { from: string; to: string }[];
  planeY0: { x1: number; y1: number; x2: number; y2: number };
}

// simple oblique camera: x to the right, z up, y into the screen
export function projectPoint(
  world: [number, number, number],
  w: number,
  h: number,
  yaw: number,
): { x: number; y: number } {
  const [x, y, z] = world;
  const cos = Math.cos(yaw);
  const sin = Math.sin(yaw);
  const px = x * cos - y * sin;
  const depth = x * sin + y * cos;
  const scale = Math.min(w, h) / 9;
  return {
    x: w / 2 + scale * (px + 0.3 * depth),
    y: h * 0.75 - scale * (z + 0.25 * depth),
  };
}

export function sigmaPairs(rule: { vertex: string; j: number; image_vertex: string }[]) {
  // sigma(t, v) = (-j - t, image); pairs for hover highlighting on any copy
  const byVertex = new Map(rule.map((r) => [r.vertex, r]));
  return (m: number, vertex: string): string | null => {
    const entry = byVertex.get(vertex);
    if (!entry) return null;
    return `${-entry.j - m}:${entry.image_vertex}`;
  };
}

export function buildScene(
  doc: EmbeddingDoc,
  rule: { vertex: string; j: number; image_vertex: string }[] | null,
  w: number,
  h: number,
  yaw: number,
): ProjectedScene {
  const pair = rule ? sigmaPairs(rule) : () => null;
  const points = doc.embedding.points.map((p: EmbeddingPointDoc) => {
    const world: [number, number, number] = [
      parseRational(p.xyz[0]),
      parseRational(p.xyz[1]),
      parseRational(p.xyz[2]),
    ];
    const { x, y } = projectPoint(world, w, h, yaw);
    return {
      key: `${p.m}:${p.vertex}`,
      m: p.m,
      vertex: p.vertex,
      world,
      x,
      y,
      mirrorKey: pair(p.m, p.vertex),
    };
  });
  const a = projectPoint([-6, 0, 0], w, h, yaw);
  const b = projectPoint([3, 0, 0], w, h, yaw);
  return {
    points,
    segments: doc.embedding.arrows.map(([from, to]) => ({ from, to })),
    planeY0: { x1: a.x, y1: a.y, x2: b.x, y2: b.y },
  };
}

export interface MirrorLayerCheck {
  layers: Map<number, string[]>;
  symmetric: boolean;
}

export function mirroredLayers(doc: EmbeddingDoc): MirrorLayerCheck {
  // group zero-slice and reflected points by their y plane; the scene is
  // mirrored when every populated plane y=j has a counterpart at y=-j
  const layers = new Map<number, string[]>();
  for (const p of doc.embedding.points) {
    const y = parseRational(p.xyz[1]);
    if (!Number.isInteger(y)) continue;
    if (!layers.has(y)) layers.set(y, []);
    layers.get(y)!.push(`${p.m}:${p.vertex}`);
  }
  let symmetric = true;
  for (const y of layers.keys()) {
    if (!layers.has(-y)) symmetric = false;
  }
  return { layers, symmetric };
}
