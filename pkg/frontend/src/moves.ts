/** Wire types for moves and sessions, plus per-node grouping of legal moves
 * so the board can highlight exactly what the selected node may do. */

import { Rat, ZERO, add, eq, parseRat } from "./rational.js";

export interface MoveJson {
  type: "placeLeafBlack" | "decreaseBlack" | "blackPlaceOrSlide" | "placeWhite";
  node: number;
  amount?: string;
  childDecreases?: Record<string, string>;
}

export interface ConfigEntry {
  node: number;
  b: string;
  w: string;
}

export interface SessionJson {
  id: string;
  game: string;
  granularity: string;
  d: number;
  h: number;
  moveCount: number;
  config: ConfigEntry[];
  weight: string;
  peak: string;
  bound: string | null;
  classifications: Record<string, boolean>;
  rootFullTimes: number[];
  pinned: boolean;
  pinnedLabel: string | null;
}

export interface ApiError {
  error: string;
  rule?: string;
}

/** (b, w) per node as exact rationals; absent nodes are empty. */
export function configMap(entries: ConfigEntry[]): Map<number, { b: Rat; w: Rat }> {
  const map = new Map<number, { b: Rat; w: Rat }>();
  for (const entry of entries) {
    map.set(entry.node, { b: parseRat(entry.b), w: parseRat(entry.w) });
  }
  return map;
}

export function valueAt(map: Map<number, { b: Rat; w: Rat }>, node: number): { b: Rat; w: Rat } {
  return map.get(node) ?? { b: ZERO, w: ZERO };
}

export interface NodeMoves {
  placements: MoveJson[];
  decreases: MoveJson[];
  slides: MoveJson[];
  whites: MoveJson[];
}

function emptyNodeMoves(): NodeMoves {
  return { placements: [], decreases: [], slides: [], whites: [] };
}

/** Group a legal-move list by acting node; ordering inside groups preserved. */
export function groupByNode(moves: MoveJson[]): Map<number, NodeMoves> {
  const grouped = new Map<number, NodeMoves>();
  for (const move of moves) {
    let entry = grouped.get(move.node);
    if (!entry) {
      entry = emptyNodeMoves();
      grouped.set(move.node, entry);
    }
    switch (move.type) {
      case "placeLeafBlack":
        entry.placements.push(move);
        break;
      case "decreaseBlack":
        entry.decreases.push(move);
        break;
      case "blackPlaceOrSlide":
        entry.slides.push(move);
        break;
      case "placeWhite":
        entry.whites.push(move);
        break;
    }
  }
  return grouped;
}

/** Total black removed from children by a sliding move. */
export function slideRemoval(move: MoveJson): Rat {
  let total = ZERO;
  for (const amount of Object.values(move.childDecreases ?? {})) {
    total = add(total, parseRat(amount));
  }
  return total;
}

/** One-line human description used by buttons, hints, and the move log. */
export function describeMove(move: MoveJson): string {
  switch (move.type) {
    case "placeLeafBlack":
      return `place ${move.amount} black on leaf ${move.node}`;
    case "decreaseBlack":
      return `decrease black on ${move.node} by ${move.amount}`;
    case "placeWhite":
      return `place white on ${move.node} (top up to 1)`;
    case "blackPlaceOrSlide": {
      const removals = Object.entries(move.childDecreases ?? {})
        .map(([child, amount]) => `${amount} from ${child}`)
        .join(", ");
      const base = `add ${move.amount} black on ${move.node}`;
      return removals ? `${base}, taking ${removals}` : base;
    }
  }
}

/** Moves are value objects; the hint runner compares them structurally. */
export function sameMove(a: MoveJson, b: MoveJson): boolean {
  if (a.type !== b.type || a.node !== b.node) return false;
  const amountA = a.amount === undefined ? null : parseRat(a.amount);
  const amountB = b.amount === undefined ? null : parseRat(b.amount);
  if ((amountA === null) !== (amountB === null)) return false;
  if (amountA !== null && amountB !== null && !eq(amountA, amountB)) return false;
  const decA = Object.entries(a.childDecreases ?? {});
  const decB = Object.entries(b.childDecreases ?? {});
  if (decA.length !== decB.length) return false;
  const byChild = new Map(decB.map(([c, amt]) => [c, amt]));
  for (const [child, amount] of decA) {
    const other = byChild.get(child);
    if (other === undefined || !eq(parseRat(amount), parseRat(other))) return false;
  }
  return true;
}
