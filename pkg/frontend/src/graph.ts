// SVG rendering of the storyboard graph: one node per screen, one arrow
// per outgoing edge, entry highlighted, unreachable screens flagged.
// Dragging from one node to another emits a connect request; the caller
// routes it through the chat pipeline.

import type { StoryboardData } from "./api.js";
import {
  NODE_HEIGHT,
  NODE_WIDTH,
  effectiveEntryId,
  layeredLayout,
  layoutExtent,
} from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphOptions {
  unreachable?: string[];
  onConnect?: (fromView: string, toView: string) => void;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

export function renderStoryboard(
  container: HTMLElement,
  sb: StoryboardData,
  options: GraphOptions = {},
): SVGSVGElement {
  container.textContent = "";
  const svg = svgEl("svg", { class: "storyboard-graph", role: "img" });

  if (!sb.nodes.length) {
    const empty = document.createElement("p");
    empty.className = "graph-empty";
    empty.textContent = "No screens yet - describe your app in the chat to get started.";
    container.appendChild(empty);
    return svg;
  }

  const positions = layeredLayout(sb);
  const extent = layoutExtent(positions);
  svg.setAttribute("viewBox", `0 0 ${extent.width} ${extent.height}`);
  svg.setAttribute("width", String(extent.width));
  svg.setAttribute("height", String(extent.height));

  const defs = svgEl("defs");
  const marker = svgEl("marker", {
    id: "arrowhead",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const byId = new Map(sb.nodes.map((n) => [n.id, n]));
  const entry = effectiveEntryId(sb);
  const unreachable = new Set(options.unreachable ?? []);

  const edgeGroup = svgEl("g", { class: "edges" });
  for (const node of sb.nodes) {
    const from = positions.get(node.id);
    if (!from) continue;
    for (const target of node.outgoingEdges) {
      const targetNode = byId.get(target);
      const to = positions.get(target);
      if (!targetNode || !to) continue;
      const x1 = from.x + NODE_WIDTH;
      const y1 = from.y + NODE_HEIGHT / 2;
      const x2 = to.x;
      const y2 = to.y + NODE_HEIGHT / 2;
      const bend = Math.max(30, (x2 - x1) / 2);
      const path = svgEl("path", {
        class: "edge",
        d: `M ${x1} ${y1} C ${x1 + bend} ${y1}, ${x2 - bend} ${y2}, ${x2} ${y2}`,
        "marker-end": "url(#arrowhead)",
        "data-from": node.swiftUIViewName,
        "data-to": targetNode.swiftUIViewName,
      });
      edgeGroup.appendChild(path);
    }
  }
  svg.appendChild(edgeGroup);

  let dragSource: string | null = null;
  const nodeGroup = svgEl("g", { class: "nodes" });
  for (const node of sb.nodes) {
    const pos = positions.get(node.id);
    if (!pos) continue;
    const classes = ["node"];
    if (node.id === entry) classes.push("entry");
    if (unreachable.has(node.swiftUIViewName)) classes.push("unreachable");
    const g = svgEl("g", {
      class: classes.join(" "),
      transform: `translate(${pos.x}, ${pos.y})`,
      "data-view": node.swiftUIViewName,
      "data-node-id": String(node.id),
    });
    g.appendChild(svgEl("rect", { width: String(NODE_WIDTH), height: String(NODE_HEIGHT), rx: "10" }));
    const title = svgEl("text", { x: String(NODE_WIDTH / 2), y: "24", "text-anchor": "middle", class: "node-name" });
    title.textContent = node.name;
    g.appendChild(title);
    const sub = svgEl("text", { x: String(NODE_WIDTH / 2), y: "42", "text-anchor": "middle", class: "node-view" });
    sub.textContent = node.swiftUIViewName;
    g.appendChild(sub);

    g.addEventListener("mousedown", () => {
      dragSource = node.swiftUIViewName;
    });
    g.addEventListener("mouseup", () => {
      if (dragSource && dragSource !== node.swiftUIViewName) {
        options.onConnect?.(dragSource, node.swiftUIViewName);
      }
      dragSource = null;
    });
    nodeGroup.appendChild(g);
  }
  svg.addEventListener("mouseleave", () => {
    dragSource = null;
  });
  svg.appendChild(nodeGroup);
  container.appendChild(svg);
  return svg;
}

/** Rendered node and arrow counts, for conformance checks against the IR. */
export function graphCounts(root: ParentNode): { nodes: number; edges: number } {
  return {
    nodes: root.querySelectorAll("g.node").length,
    edges: root.querySelectorAll("path.edge").length,
  };
}
