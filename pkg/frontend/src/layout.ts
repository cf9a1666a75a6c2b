/**
 * Deterministic graph layout: a small force simulation with optional
 * pinned layering for trace views (input messages on the left, the
 * decision on the right). No randomness: initial positions come from a
 * hash of the node id, so the same graph always lays out the same way.
 */

import type { GraphView } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  layered?: boolean;
}

/** FNV-1a, folded to [0, 1): stable pseudo-position per node id. */
export function hash01(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i += 1) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return (hash >>> 0) / 0x100000000;
}

/**
 * Left-to-right layer per node for trace-style views: input messages sit at
 * depth 0 and every edge pushes its target one layer further right.
 * Nodes unreachable from any input message follow their distance from the
 * leftmost reachable neighbour (or land on layer 1).
 */
export function layerDepths(view: GraphView): Map<string, number> {
  const depths = new Map<string, number>();
  const outgoing = new Map<string, { to: string }[]>();
  for (const edge of view.edges) {
    const list = outgoing.get(edge.from) ?? [];
    list.push({ to: edge.to });
    outgoing.set(edge.from, list);
  }
  const queue: string[] = [];
  for (const node of view.nodes) {
    if (node.label === "InputMessage") {
      depths.set(node.id, 0);
      queue.push(node.id);
    }
  }
  if (queue.length === 0) {
    for (const node of view.nodes) {
      if (!view.edges.some((e) => e.to === node.id)) {
        depths.set(node.id, 0);
        queue.push(node.id);
      }
    }
  }
  while (queue.length > 0) {
    const current = queue.shift() as string;
    const depth = depths.get(current) ?? 0;
    for (const { to } of outgoing.get(current) ?? []) {
      const known = depths.get(to);
      if (known === undefined || known < depth + 1) {
        depths.set(to, depth + 1);
        queue.push(to);
      }
    }
  }
  for (const node of view.nodes) {
    if (!depths.has(node.id)) depths.set(node.id, 1);
  }
  return depths;
}

/** Force-directed positions; with `layered`, x is pinned per layer. */
export function computeLayout(view: GraphView, options: LayoutOptions): Map<string, Point> {
  const { width, height } = options;
  const iterations = options.iterations ?? 150;
  const nodes = view.nodes.map((n) => n.id);
  const positions = new Map<string, Point>();
  const layers = options.layered ? layerDepths(view) : null;
  const maxLayer = layers ? Math.max(1, ...layers.values()) : 1;

  for (const id of nodes) {
    const jitterX = hash01(id);
    const jitterY = hash01(`${id}/y`);
    const x = layers
      ? (((layers.get(id) ?? 0) + 0.5) / (maxLayer + 1)) * width
      : (0.1 + 0.8 * jitterX) * width;
    positions.set(id, { x, y: (0.1 + 0.8 * jitterY) * height });
  }
  if (nodes.length <= 1) return positions;

  const springLength = Math.min(width, height) / Math.max(2, Math.sqrt(nodes.length));
  for (let step = 0; step < iterations; step += 1) {
    const temperature = 0.1 * (1 - step / iterations) + 0.01;
    const forces = new Map<string, Point>(nodes.map((id) => [id, { x: 0, y: 0 }]));
    // pairwise repulsion
    for (let i = 0; i < nodes.length; i += 1) {
      for (let j = i + 1; j < nodes.length; j += 1) {
        const a = positions.get(nodes[i]) as Point;
        const b = positions.get(nodes[j]) as Point;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let distSq = dx * dx + dy * dy;
        if (distSq < 1e-6) {
          // deterministic nudge for coincident nodes
          dx = hash01(nodes[i] + nodes[j]) - 0.5;
          dy = 0.5 - hash01(nodes[j] + nodes[i]);
          distSq = dx * dx + dy * dy;
        }
        const push = (springLength * springLength) / distSq;
        const fa = forces.get(nodes[i]) as Point;
        const fb = forces.get(nodes[j]) as Point;
        fa.x += dx * push; fa.y += dy * push;
        fb.x -= dx * push; fb.y -= dy * push;
      }
    }
    // spring attraction along edges
    for (const edge of view.edges) {
      const a = positions.get(edge.from);
      const b = positions.get(edge.to);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-3);
      const pull = (dist - springLength) / dist;
      const fa = forces.get(edge.from) as Point;
      const fb = forces.get(edge.to) as Point;
      fa.x += dx * pull * 0.5; fa.y += dy * pull * 0.5;
      fb.x -= dx * pull * 0.5; fb.y -= dy * pull * 0.5;
    }
    for (const id of nodes) {
      const position = positions.get(id) as Point;
      const force = forces.get(id) as Point;
      if (!layers) {
        position.x += force.x * temperature;
      }
      position.y += force.y * temperature;
      position.x = Math.min(Math.max(position.x, 30), width - 30);
      position.y = Math.min(Math.max(position.y, 30), height - 30);
    }
  }
  return positions;
}
