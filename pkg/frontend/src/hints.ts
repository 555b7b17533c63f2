/** Strategy step-through state.
 *
 * After pinning, the session either tracks the pinned move list (the next
 * hint has index == moves played) or has diverged (the player took over).
 * This reducer mirrors the server's hint contract so the UI can label the
 * pin button, the step button, and the divergence banner without extra
 * round trips.
 */

export type HintPhase =
  | { kind: "unpinned" }
  | { kind: "tracking"; nextIndex: number; remaining: number; label: string }
  | { kind: "done"; label: string }
  | { kind: "diverged"; label: string; message: string };

export interface HintResponseJson {
  move?: unknown;
  index?: number;
  remaining?: number;
  done?: boolean;
}

export function initialPhase(): HintPhase {
  return { kind: "unpinned" };
}

export function afterPin(label: string): HintPhase {
  return { kind: "tracking", nextIndex: 0, remaining: NaN, label };
}

export function fromHintResponse(label: string, body: HintResponseJson): HintPhase {
  if (body.done) return { kind: "done", label };
  return {
    kind: "tracking",
    nextIndex: body.index ?? 0,
    remaining: body.remaining ?? NaN,
    label,
  };
}

export function afterDivergence(label: string, message: string): HintPhase {
  return { kind: "diverged", label, message };
}

/** An undo can re-join the pinned line; a fresh hint fetch decides.  Until
 * then treat the state as unknown-but-pinned. */
export function needsRefresh(phase: HintPhase): boolean {
  return phase.kind === "tracking" || phase.kind === "diverged" || phase.kind === "done";
}

export function stepLabel(phase: HintPhase): string {
  switch (phase.kind) {
    case "unpinned":
      return "pin a strategy to step";
    case "tracking":
      return Number.isNaN(phase.remaining)
        ? `step (${phase.label})`
        : `step ${phase.nextIndex + 1} (${phase.remaining} left)`;
    case "done":
      return `${phase.label}: complete`;
    case "diverged":
      return "diverged — undo to re-join";
  }
}
