/** Geometry of the balanced d-ary tree board.
 *
 * Nodes are numbered level order from the root: node 0 is the root and the
 * children of node i are d*i+1 ... d*i+d.  A tree of height h has h levels
 * and (d^h - 1)/(d - 1) nodes; leaves sit on the last level.
 */

export interface TreeGeom {
  readonly d: number;
  readonly h: number;
  readonly nodeCount: number;
}

export interface Point {
  readonly x: number;
  readonly y: number;
}

export function treeGeom(d: number, h: number): TreeGeom {
  if (d < 2 || h < 1) throw new Error(`unsupported tree d=${d} h=${h}`);
  return { d, h, nodeCount: (d ** h - 1) / (d - 1) };
}

export function levelOf(geom: TreeGeom, node: number): number {
  if (node < 0 || node >= geom.nodeCount) throw new Error(`node ${node} out of range`);
  let level = 0;
  let firstOfNext = 1;
  while (node >= firstOfNext) {
    level += 1;
    firstOfNext += geom.d ** level;
  }
  return level;
}

export function parentOf(geom: TreeGeom, node: number): number | null {
  if (node <= 0 || node >= geom.nodeCount) return null;
  return Math.floor((node - 1) / geom.d);
}

export function childrenOf(geom: TreeGeom, node: number): number[] {
  const first = geom.d * node + 1;
  if (first >= geom.nodeCount) return [];
  return Array.from({ length: geom.d }, (_, i) => first + i);
}

export function isLeaf(geom: TreeGeom, node: number): boolean {
  return childrenOf(geom, node).length === 0;
}

/**
 * Node centers for an SVG viewport.  Leaves are spread evenly across the
 * width; every internal node is centered over its leaf span, which for a
 * complete tree is a direct computation (no traversal).
 */
export function nodePositions(
  geom: TreeGeom,
  width: number,
  height: number,
  margin = 36,
): Point[] {
  const positions: Point[] = [];
  const levels = geom.h;
  const leafCount = geom.d ** (levels - 1);
  const innerW = width - 2 * margin;
  const innerH = height - 2 * margin;
  const levelGap = levels > 1 ? innerH / (levels - 1) : 0;
  for (let node = 0; node < geom.nodeCount; node++) {
    const level = levelOf(geom, node);
    const firstOfLevel = (geom.d ** level - 1) / (geom.d - 1);
    const indexInLevel = node - firstOfLevel;
    const leavesPerSubtree = geom.d ** (levels - 1 - level);
    const xUnit = innerW / leafCount;
    const x = margin + (indexInLevel + 0.5) * leavesPerSubtree * xUnit;
    const y = margin + level * levelGap;
    positions.push({ x, y });
  }
  return positions;
}

/** Parent-to-child segments, one per non-root node. */
export function edges(geom: TreeGeom): Array<[number, number]> {
  const result: Array<[number, number]> = [];
  for (let node = 1; node < geom.nodeCount; node++) {
    result.push([parentOf(geom, node)!, node]);
  }
  return result;
}
