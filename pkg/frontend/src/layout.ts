/**
 * Deterministic force-directed layout.
 *
 * Nodes start evenly spaced on a circle (sorted by id) and relax under
 * pairwise repulsion, spring attraction along edges, and a weak centering
 * pull, for a fixed iteration count. No randomness: the same graph always
 * lands in the same positions.
 */
import type { GraphJson } from './types.js';

export interface Point {
  x: number;
  y: number;
}

export type Layout = Map<string, Point>;

const ITERATIONS = 300;
const REPULSION = 12_000;
const SPRING = 0.02;
const SPRING_LENGTH = 160;
const CENTERING = 0.01;
const DAMPING = 0.85;

export function computeLayout(graph: GraphJson, width = 800, height = 520): Layout {
  const ids = [...graph.nodes.map((n) => n.id)].sort();
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 3;

  const pos = new Map<string, Point>();
  const vel = new Map<string, Point>();
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / Math.max(ids.length, 1);
    pos.set(id, { x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) });
    vel.set(id, { x: 0, y: 0 });
  });
  if (ids.length <= 1) return pos;

  const edges = graph.edges.map((e) => [e.source, e.target] as const);

  for (let step = 0; step < ITERATIONS; step++) {
    const force = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));

    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = pos.get(ids[i])!;
        const b = pos.get(ids[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const distSq = Math.max(dx * dx + dy * dy, 1);
        const dist = Math.sqrt(distSq);
        const push = REPULSION / distSq;
        dx /= dist;
        dy /= dist;
        const fa = force.get(ids[i])!;
        const fb = force.get(ids[j])!;
        fa.x += dx * push;
        fa.y += dy * push;
        fb.x -= dx * push;
        fb.y -= dy * push;
      }
    }

    for (const [source, target] of edges) {
      if (source === target) continue;
      const a = pos.get(source)!;
      const b = pos.get(target)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = SPRING * (dist - SPRING_LENGTH);
      const fa = force.get(source)!;
      const fb = force.get(target)!;
      fa.x += (dx / dist) * pull;
      fa.y += (dy / dist) * pull;
      fb.x -= (dx / dist) * pull;
      fb.y -= (dy / dist) * pull;
    }

    for (const id of ids) {
      const p = pos.get(id)!;
      const v = vel.get(id)!;
      const f = force.get(id)!;
      f.x += (cx - p.x) * CENTERING;
      f.y += (cy - p.y) * CENTERING;
      v.x = (v.x + f.x) * DAMPING;
      v.y = (v.y + f.y) * DAMPING;
      p.x += v.x;
      p.y += v.y;
    }
  }

  for (const p of pos.values()) {
    p.x = Math.min(Math.max(p.x, 40), width - 40);
    p.y = Math.min(Math.max(p.y, 40), height - 40);
  }
  return pos;
}
