/**
 * Display pruning for the network view: structural selection only, never a
 * score input. The engine embeds its own retained set in the audit; this
 * mirror re-derives one when an uploaded audit lacks it or exceeds the cap
 * (root and all distance-1 nodes first, then farther rings by the strength
 * of their strongest edge to an already-retained node).
 */

import type { CoauthorGraphDoc } from './types.js';

export const DISPLAY_NODE_CAP = 150;

export function displayNodes(graph: CoauthorGraphDoc,
                             maxNodes: number = DISPLAY_NODE_CAP): Set<string> {
  const all = graph.nodes.map((n) => n.id);
  const embedded = new Set(graph.display_retained ?? []);
  if (embedded.size > 0 && embedded.size <= maxNodes) {
    return embedded;
  }
  if (all.length <= maxNodes) {
    return new Set(all);
  }

  const distance = new Map(graph.nodes.map((n) => [n.id, n.distance]));
  const strongestTo = new Map<string, Map<string, number>>();
  for (const edge of graph.edges) {
    if (!strongestTo.has(edge.a)) strongestTo.set(edge.a, new Map());
    if (!strongestTo.has(edge.b)) strongestTo.set(edge.b, new Map());
    strongestTo.get(edge.a)!.set(edge.b, edge.strength);
    strongestTo.get(edge.b)!.set(edge.a, edge.strength);
  }

  const retained = new Set<string>([graph.root]);
  const ring1 = all.filter((id) => distance.get(id) === 1).sort();
  for (const id of ring1) retained.add(id);
  if (retained.size >= maxNodes) {
    return retained; // every direct co-author stays even past the cap
  }

  const maxDistance = Math.max(0, ...all.map((id) => distance.get(id) ?? 0));
  for (let ring = 2; ring <= maxDistance; ring++) {
    const anchorStrength = (id: string): number => {
      let best = 0;
      for (const [neighbor, strength] of strongestTo.get(id) ?? []) {
        if (retained.has(neighbor)) best = Math.max(best, strength);
      }
      return best;
    };
    const candidates = all
      .filter((id) => distance.get(id) === ring)
      .sort((x, y) => anchorStrength(y) - anchorStrength(x) || x.localeCompare(y));
    for (const id of candidates) {
      if (retained.size >= maxNodes) return retained;
      retained.add(id);
    }
  }
  return retained;
}
