// Deterministic layered left-to-right layout. Layer 0 holds the entry
// screen; each following layer holds screens first reached from the one
// before (BFS order, ids ascending within a layer). Screens unreachable
// from the entry go into trailing layers so they are still visible.

import type { StoryboardData } from "./api.js";

export interface NodePosition {
  x: number;
  y: number;
  layer: number;
  row: number;
}

export const LAYER_WIDTH = 220;
export const ROW_HEIGHT = 96;
export const NODE_WIDTH = 168;
export const NODE_HEIGHT = 56;
const MARGIN_X = 24;
const MARGIN_Y = 24;

export function effectiveEntryId(sb: StoryboardData): number | null {
  if (sb.entryNodeId !== undefined && sb.entryNodeId !== null) {
    return sb.entryNodeId;
  }
  if (!sb.nodes.length) {
    return null;
  }
  return Math.min(...sb.nodes.map((n) => n.id));
}

export function layeredLayout(sb: StoryboardData): Map<number, NodePosition> {
  const byId = new Map(sb.nodes.map((n) => [n.id, n]));
  const layers: number[][] = [];
  const placed = new Set<number>();

  const entry = effectiveEntryId(sb);
  if (entry !== null && byId.has(entry)) {
    let frontier = [entry];
    placed.add(entry);
    while (frontier.length) {
      layers.push([...frontier].sort((a, b) => a - b));
      const next: number[] = [];
      for (const id of frontier) {
        for (const target of byId.get(id)?.outgoingEdges ?? []) {
          if (byId.has(target) && !placed.has(target)) {
            placed.add(target);
            next.push(target);
          }
        }
      }
      frontier = next;
    }
  }

  const leftovers = sb.nodes
    .map((n) => n.id)
    .filter((id) => !placed.has(id))
    .sort((a, b) => a - b);
  const rowsPerLayer = Math.max(1, ...layers.map((l) => l.length));
  for (let i = 0; i < leftovers.length; i += rowsPerLayer) {
    layers.push(leftovers.slice(i, i + rowsPerLayer));
  }

  const positions = new Map<number, NodePosition>();
  layers.forEach((layer, layerIndex) => {
    layer.forEach((id, row) => {
      positions.set(id, {
        x: MARGIN_X + layerIndex * LAYER_WIDTH,
        y: MARGIN_Y + row * ROW_HEIGHT,
        layer: layerIndex,
        row,
      });
    });
  });
  return positions;
}

export function layoutExtent(positions: Map<number, NodePosition>): { width: number; height: number } {
  let width = MARGIN_X * 2 + NODE_WIDTH;
  let height = MARGIN_Y * 2 + NODE_HEIGHT;
  for (const pos of positions.values()) {
    width = Math.max(width, pos.x + NODE_WIDTH + MARGIN_X);
    height = Math.max(height, pos.y + NODE_HEIGHT + MARGIN_Y);
  }
  return { width, height };
}
