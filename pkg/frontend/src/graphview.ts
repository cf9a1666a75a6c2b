/**
 * Graph scenes: the displayable items of an answer or check graph view.
 *
 * buildScene() is pure (and unit-tested): one item per node and per edge,
 * styling derived only from properties the API set (highlight, fired,
 * satisfied, active, origin). renderSvg() materialises a scene into SVG.
 */

import { computeLayout, Point } from "./layout.js";
import type { GraphView, Scalar } from "./types.js";

export interface NodeItem {
  kind: "node";
  id: string;
  label: string;
  caption: string;
  valueText: string | null;
  shape: "ellipse" | "box" | "parallelogram" | "note" | "folder" | "hexagon";
  highlighted: boolean;
  dimmed: boolean;
}

export interface EdgeItem {
  kind: "edge";
  id: string;
  from: string;
  to: string;
  label: string;
  highlighted: boolean;
  dimmed: boolean;
  satisfied: boolean | null;
}

export type SceneItem = NodeItem | EdgeItem;

export interface Scene {
  items: SceneItem[];
  nodeCount: number;
  edgeCount: number;
}

const SHAPES: Record<string, NodeItem["shape"]> = {
  Variable: "ellipse",
  Rule: "box",
  InputMessage: "parallelogram",
  OutputMessage: "parallelogram",
  Source: "note",
  ObjectType: "folder",
  Service: "hexagon",
};

function renderValue(value: Scalar): string {
  if (typeof value === "boolean") return value ? "true" : "false";
  return String(value);
}

export function buildScene(view: GraphView, visibleLabels?: Set<string>): Scene {
  const keep = (label: string) =>
    !visibleLabels || visibleLabels.size === 0 || visibleLabels.has(label);
  const keptNodes = new Set<string>();
  const items: SceneItem[] = [];
  for (const node of view.nodes) {
    if (!keep(node.label)) continue;
    keptNodes.add(node.id);
    items.push({
      kind: "node",
      id: node.id,
      label: node.label,
      caption: renderValue(node.properties.name ?? node.id),
      valueText: node.properties.value !== undefined
        ? renderValue(node.properties.value) : null,
      shape: SHAPES[node.label] ?? "box",
      highlighted: node.properties.highlight === true,
      dimmed: node.label === "Rule" && node.properties.fired === false,
    });
  }
  for (const edge of view.edges) {
    if (!keptNodes.has(edge.from) || !keptNodes.has(edge.to)) continue;
    items.push({
      kind: "edge",
      id: edge.id,
      from: edge.from,
      to: edge.to,
      label: edge.label,
      highlighted: edge.properties.highlight === true,
      dimmed: edge.properties.satisfied === false || edge.properties.active === false,
      satisfied: typeof edge.properties.satisfied === "boolean"
        ? edge.properties.satisfied : null,
    });
  }
  return {
    items,
    nodeCount: items.filter((i) => i.kind === "node").length,
    edgeCount: items.filter((i) => i.kind === "edge").length,
  };
}

/** Ids to emphasise for one trace step: the rule plus its direct ends. */
export function stepEmphasis(view: GraphView, ruleName: string): Set<string> {
  const ruleId = `rule:${ruleName}`;
  const ids = new Set<string>([ruleId]);
  for (const edge of view.edges) {
    if (edge.from === ruleId || edge.to === ruleId) {
      ids.add(edge.id);
      ids.add(edge.from);
      ids.add(edge.to);
    }
  }
  return ids;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderOptions {
  width: number;
  height: number;
  layered?: boolean;
  emphasis?: Set<string>;
  onNodeClick?: (id: string) => void;
}

export function renderSvg(container: HTMLElement, view: GraphView,
                          scene: Scene, options: RenderOptions): void {
  container.textContent = "";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${options.width} ${options.height}`);
  svg.classList.add("graph-canvas");
  const positions = computeLayout(view, {
    width: options.width,
    height: options.height,
    layered: options.layered,
  });

  for (const item of scene.items) {
    if (item.kind !== "edge") continue;
    const from = positions.get(item.from);
    const to = positions.get(item.to);
    if (!from || !to) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("edge");
    if (item.highlighted) group.classList.add("highlight");
    if (item.dimmed) group.classList.add("dimmed");
    if (options.emphasis && !options.emphasis.has(item.id)) group.classList.add("faded");
    if (item.satisfied === true) group.classList.add("satisfied");
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    group.appendChild(line);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String((from.x + to.x) / 2));
    text.setAttribute("y", String((from.y + to.y) / 2 - 4));
    text.textContent = item.label;
    group.appendChild(text);
    svg.appendChild(group);
  }

  for (const item of scene.items) {
    if (item.kind !== "node") continue;
    const position = positions.get(item.id);
    if (!position) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("node", `shape-${item.shape}`);
    if (item.highlighted) group.classList.add("highlight");
    if (item.dimmed) group.classList.add("dimmed");
    if (options.emphasis && !options.emphasis.has(item.id)) group.classList.add("faded");
    group.appendChild(nodeOutline(item.shape, position));
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(position.x));
    text.setAttribute("y", String(position.y - (item.valueText ? 4 : 0)));
    text.textContent = item.caption;
    group.appendChild(text);
    if (item.valueText !== null) {
      const value = document.createElementNS(SVG_NS, "text");
      value.classList.add("value");
      value.setAttribute("x", String(position.x));
      value.setAttribute("y", String(position.y + 12));
      value.textContent = `= ${item.valueText}`;
      group.appendChild(value);
    }
    if (options.onNodeClick) {
      group.addEventListener("click", () => options.onNodeClick!(item.id));
    }
    svg.appendChild(group);
  }
  container.appendChild(svg);
}

function nodeOutline(shape: NodeItem["shape"], at: Point): Element {
  if (shape === "ellipse") {
    const ellipse = document.createElementNS(SVG_NS, "ellipse");
    ellipse.setAttribute("cx", String(at.x));
    ellipse.setAttribute("cy", String(at.y));
    ellipse.setAttribute("rx", "52");
    ellipse.setAttribute("ry", "22");
    return ellipse;
  }
  const rect = document.createElementNS(SVG_NS, "rect");
  rect.setAttribute("x", String(at.x - 52));
  rect.setAttribute("y", String(at.y - 20));
  rect.setAttribute("width", "104");
  rect.setAttribute("height", "40");
  if (shape === "parallelogram") rect.setAttribute("transform", `skewX(-12)`);
  if (shape === "note" || shape === "folder") rect.setAttribute("rx", "8");
  if (shape === "hexagon") rect.setAttribute("rx", "16");
  return rect;
}
