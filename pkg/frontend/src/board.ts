/** SVG board: tree edges, pebble nodes with exact black/white fill fractions,
 * legal-move highlighting, and a click-to-select ring. */

import { TreeGeom, edges, nodePositions } from "./layout.js";
import { configMap, valueAt, type ConfigEntry } from "./moves.js";
import { Rat, ZERO, add, eq, toNumber } from "./rational.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const NODE_RADIUS = 22;

export interface BoardState {
  geom: TreeGeom;
  config: ConfigEntry[];
  /** nodes that currently have at least one legal move */
  actionable: Set<number>;
  selected: number | null;
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function fillStack(
  cx: number,
  cy: number,
  clipId: string,
  b: Rat,
  w: Rat,
): SVGGElement {
  const group = el("g", { "clip-path": `url(#${clipId})` });
  const diameter = 2 * NODE_RADIUS;
  const top = cy - NODE_RADIUS;
  const blackH = toNumber(b) * diameter;
  const whiteH = toNumber(w) * diameter;
  // black sits at the bottom of the circle, white stacked above it
  group.appendChild(
    el("rect", {
      x: cx - NODE_RADIUS,
      y: top + diameter - blackH,
      width: diameter,
      height: blackH,
      class: "fill-black",
    }),
  );
  group.appendChild(
    el("rect", {
      x: cx - NODE_RADIUS,
      y: top + diameter - blackH - whiteH,
      width: diameter,
      height: whiteH,
      class: "fill-white",
    }),
  );
  return group;
}

export class Board {
  private readonly svg: SVGSVGElement;

  constructor(
    container: HTMLElement,
    private readonly width: number,
    private readonly height: number,
    private readonly onSelect: (node: number) => void,
  ) {
    this.svg = el("svg", {
      viewBox: `0 0 ${width} ${height}`,
      class: "board",
    });
    container.appendChild(this.svg);
  }

  render(state: BoardState): void {
    this.svg.replaceChildren();
    const positions = nodePositions(state.geom, this.width, this.height);
    const values = configMap(state.config);

    const defs = el("defs", {});
    this.svg.appendChild(defs);
    for (const [parent, child] of edges(state.geom)) {
      const a = positions[parent];
      const b = positions[child];
      this.svg.appendChild(
        el("line", { x1: a.x, y1: a.y, x2: b.x, y2: b.y, class: "edge" }),
      );
    }
    for (let node = 0; node < state.geom.nodeCount; node++) {
      const { x, y } = positions[node];
      const { b, w } = valueAt(values, node);
      const clipId = `node-clip-${node}`;
      const clip = el("clipPath", { id: clipId });
      clip.appendChild(el("circle", { cx: x, cy: y, r: NODE_RADIUS }));
      defs.appendChild(clip);

      const group = el("g", { class: "node", "data-node": node });
      group.appendChild(
        el("circle", { cx: x, cy: y, r: NODE_RADIUS, class: "node-bg" }),
      );
      if (!(eq(b, ZERO) && eq(w, ZERO))) {
        group.appendChild(fillStack(x, y, clipId, b, w));
      }
      const ringClass = [
        "node-ring",
        state.actionable.has(node) ? "actionable" : "",
        state.selected === node ? "selected" : "",
      ]
        .filter(Boolean)
        .join(" ");
      group.appendChild(el("circle", { cx: x, cy: y, r: NODE_RADIUS, class: ringClass }));
      const label = el("text", { x, y: y + NODE_RADIUS + 14, class: "node-label" });
      label.textContent = String(node);
      group.appendChild(label);
      const value = add(b, w);
      if (!eq(value, ZERO)) {
        const valueText = el("text", { x, y: y + 4, class: "node-value" });
        valueText.textContent = `${formatShort(b)}|${formatShort(w)}`;
        group.appendChild(valueText);
      }
      group.addEventListener("click", () => this.onSelect(node));
      this.svg.appendChild(group);
    }
  }
}

function formatShort(x: Rat): string {
  return x.d === 1n ? `${x.n}` : `${x.n}/${x.d}`;
}
