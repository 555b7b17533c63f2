import { describe, expect, it } from "vitest";

import {
  MoveJson,
  configMap,
  describeMove,
  groupByNode,
  sameMove,
  slideRemoval,
  valueAt,
} from "../../src/moves.js";
import { formatRat } from "../../src/rational.js";

const LEGAL: MoveJson[] = [
  { type: "placeLeafBlack", node: 3, amount: "1/2" },
  { type: "placeLeafBlack", node: 3, amount: "1" },
  { type: "decreaseBlack", node: 3, amount: "1/2" },
  { type: "placeWhite", node: 1 },
  {
    type: "blackPlaceOrSlide",
    node: 1,
    amount: "1",
    childDecreases: { "3": "1/2", "4": "1" },
  },
];

describe("groupByNode", () => {
  it("buckets by node and move kind, preserving order", () => {
    const grouped = groupByNode(LEGAL);
    expect([...grouped.keys()]).toEqual([3, 1]);
    const node3 = grouped.get(3)!;
    expect(node3.placements.map((m) => m.amount)).toEqual(["1/2", "1"]);
    expect(node3.decreases).toHaveLength(1);
    expect(node3.slides).toHaveLength(0);
    const node1 = grouped.get(1)!;
    expect(node1.whites).toHaveLength(1);
    expect(node1.slides).toHaveLength(1);
  });
});

describe("config helpers", () => {
  it("parses entries and defaults absent nodes to empty", () => {
    const map = configMap([
      { node: 0, b: "1/4", w: "3/4" },
      { node: 2, b: "1", w: "0" },
    ]);
    expect(formatRat(valueAt(map, 0).b)).toBe("1/4");
    expect(formatRat(valueAt(map, 0).w)).toBe("3/4");
    expect(formatRat(valueAt(map, 5).b)).toBe("0");
  });
});

describe("slideRemoval", () => {
  it("totals the child decreases exactly", () => {
    expect(formatRat(slideRemoval(LEGAL[4]))).toBe("3/2");
    expect(formatRat(slideRemoval({ type: "blackPlaceOrSlide", node: 0, amount: "0" }))).toBe(
      "0",
    );
  });
});

describe("describeMove", () => {
  it("names every move type", () => {
    expect(describeMove(LEGAL[0])).toBe("place 1/2 black on leaf 3");
    expect(describeMove(LEGAL[2])).toBe("decrease black on 3 by 1/2");
    expect(describeMove(LEGAL[3])).toBe("place white on 1 (top up to 1)");
    expect(describeMove(LEGAL[4])).toBe("add 1 black on 1, taking 1/2 from 3, 1 from 4");
  });
});

describe("sameMove", () => {
  it("compares amounts as rationals, not strings", () => {
    expect(
      sameMove(
        { type: "placeLeafBlack", node: 3, amount: "1/2" },
        { type: "placeLeafBlack", node: 3, amount: "2/4" },
      ),
    ).toBe(true);
    expect(
      sameMove(
        { type: "placeLeafBlack", node: 3, amount: "1/2" },
        { type: "placeLeafBlack", node: 4, amount: "1/2" },
      ),
    ).toBe(false);
  });

  it("compares child decreases as an unordered exact map", () => {
    const a: MoveJson = {
      type: "blackPlaceOrSlide",
      node: 0,
      amount: "1",
      childDecreases: { "1": "1/2", "2": "1" },
    };
    const b: MoveJson = {
      type: "blackPlaceOrSlide",
      node: 0,
      amount: "1",
      childDecreases: { "2": "2/2", "1": "2/4" },
    };
    expect(sameMove(a, b)).toBe(true);
    expect(sameMove(a, { ...a, childDecreases: { "1": "1/2" } })).toBe(false);
    expect(sameMove(a, { ...a, childDecreases: { "1": "1/2", "2": "1/2" } })).toBe(false);
  });
});
