import { describe, expect, it } from "vitest";

import {
  afterDivergence,
  afterPin,
  fromHintResponse,
  initialPhase,
  needsRefresh,
  stepLabel,
} from "../../src/hints.js";

describe("hint phase transitions", () => {
  it("starts unpinned and pinning arms tracking", () => {
    expect(initialPhase().kind).toBe("unpinned");
    expect(needsRefresh(initialPhase())).toBe(false);
    const pinned = afterPin("fractional strategy");
    expect(pinned.kind).toBe("tracking");
    expect(needsRefresh(pinned)).toBe(true);
  });

  it("maps server hint bodies", () => {
    const tracking = fromHintResponse("s", { move: {}, index: 4, remaining: 9 });
    expect(tracking).toEqual({ kind: "tracking", nextIndex: 4, remaining: 9, label: "s" });
    const done = fromHintResponse("s", { done: true, index: 13 });
    expect(done.kind).toBe("done");
  });

  it("records divergence with the server message", () => {
    const phase = afterDivergence("s", "session diverged from the pinned strategy at move 2");
    expect(phase.kind).toBe("diverged");
    expect(stepLabel(phase)).toContain("undo");
  });

  it("labels each phase for the step button", () => {
    expect(stepLabel(initialPhase())).toContain("pin");
    expect(stepLabel(fromHintResponse("s", { move: {}, index: 0, remaining: 13 }))).toBe(
      "step 1 (13 left)",
    );
    expect(stepLabel(fromHintResponse("s", { done: true }))).toContain("complete");
  });
});
