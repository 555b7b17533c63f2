/** Playground wiring: session lifecycle, board interaction, move buttons with
 * a fraction picker at granularity multiples, weight gauge with the bound
 * marker, undo, and pinned-strategy step-through. */

import { ApiFailure, Client } from "./api.js";
import { Board } from "./board.js";
import { gaugeModel } from "./gauge.js";
import {
  HintPhase,
  afterDivergence,
  fromHintResponse,
  initialPhase,
  stepLabel,
} from "./hints.js";
import { treeGeom } from "./layout.js";
import {
  MoveJson,
  SessionJson,
  describeMove,
  groupByNode,
  type NodeMoves,
} from "./moves.js";
import { parseRat } from "./rational.js";
import { Toaster } from "./toast.js";

const API_BASE = (window as { PEBBLE_API?: string }).PEBBLE_API ?? "http://127.0.0.1:8000";

interface AppState {
  session: SessionJson | null;
  legal: MoveJson[];
  selected: number | null;
  hint: HintPhase;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function start(): void {
  const client = new Client(API_BASE);
  const toaster = new Toaster(byId("toasts"));
  const board = new Board(byId("board"), 760, 420, (node) => selectNode(node));
  const state: AppState = {
    session: null,
    legal: [],
    selected: null,
    hint: initialPhase(),
  };

  const newForm = byId<HTMLFormElement>("new-session");
  const gameSelect = byId<HTMLSelectElement>("game");
  const dInput = byId<HTMLInputElement>("arity");
  const hInput = byId<HTMLInputElement>("height");
  const granularityInput = byId<HTMLInputElement>("granularity");
  const statusLine = byId("status");
  const movePanel = byId("move-panel");
  const gaugeFill = byId("gauge-fill");
  const gaugePeak = byId("gauge-peak");
  const gaugeBound = byId("gauge-bound");
  const gaugeText = byId("gauge-text");
  const undoButton = byId<HTMLButtonElement>("undo");
  const pinButton = byId<HTMLButtonElement>("pin");
  const stepButton = byId<HTMLButtonElement>("step");
  const runButton = byId<HTMLButtonElement>("run");
  const epsilonInput = byId<HTMLInputElement>("epsilon");

  async function refresh(session: SessionJson): Promise<void> {
    state.session = session;
    const legal = await client.legalMoves(session.id);
    state.legal = legal.moves;
    render();
  }

  function render(): void {
    const session = state.session;
    if (!session) return;
    const geom = treeGeom(session.d, session.h);
    const grouped = groupByNode(state.legal);
    board.render({
      geom,
      config: session.config,
      actionable: new Set(grouped.keys()),
      selected: state.selected,
    });
    const weight = parseRat(session.weight);
    const peak = parseRat(session.peak);
    const bound = session.bound ? parseRat(session.bound) : null;
    const gauge = gaugeModel(weight, peak, bound);
    gaugeFill.style.width = `${(gauge.weightFrac * 100).toFixed(1)}%`;
    gaugeFill.classList.toggle("over", gauge.overBound);
    gaugePeak.style.left = `${(gauge.peakFrac * 100).toFixed(1)}%`;
    if (gauge.boundFrac !== null) {
      gaugeBound.style.display = "block";
      gaugeBound.style.left = `${(gauge.boundFrac * 100).toFixed(1)}%`;
    } else {
      gaugeBound.style.display = "none";
    }
    gaugeText.textContent =
      `weight ${session.weight} · peak ${session.peak}` +
      (session.bound ? ` · bound ${session.bound}` : "");
    const reached = session.classifications["root-pebbling"];
    statusLine.textContent =
      `${session.game} (grid ${session.granularity}) on the d=${session.d}, h=${session.h} tree` +
      ` · ${session.moveCount} moves` +
      (reached ? " · root pebbled and cleared ✓" : "");
    undoButton.disabled = session.moveCount === 0;
    stepButton.textContent = stepLabel(state.hint);
    stepButton.disabled = state.hint.kind !== "tracking";
    runButton.disabled = state.hint.kind !== "tracking";
    renderMovePanel(grouped);
  }

  function renderMovePanel(grouped: Map<number, NodeMoves>): void {
    movePanel.replaceChildren();
    const node = state.selected;
    if (node === null) {
      movePanel.textContent = "select a highlighted node to see its legal moves";
      return;
    }
    const options = grouped.get(node);
    if (!options) {
      movePanel.textContent = `node ${node} has no legal moves`;
      return;
    }
    const sections: Array<[string, MoveJson[]]> = [
      ["place", options.placements],
      ["white", options.whites],
      ["decrease", options.decreases],
      ["slide / add", options.slides],
    ];
    for (const [title, moves] of sections) {
      if (!moves.length) continue;
      const heading = document.createElement("h3");
      heading.textContent = title;
      movePanel.appendChild(heading);
      const list = document.createElement("div");
      list.className = "move-buttons";
      for (const move of moves.slice(0, 48)) {
        const button = document.createElement("button");
        button.textContent = describeMove(move);
        button.addEventListener("click", () => void play(move));
        list.appendChild(button);
      }
      if (moves.length > 48) {
        const note = document.createElement("p");
        note.textContent = `… and ${moves.length - 48} more`;
        list.appendChild(note);
      }
      movePanel.appendChild(list);
    }
  }

  function selectNode(node: number): void {
    state.selected = state.selected === node ? null : node;
    render();
  }

  async function play(move: MoveJson): Promise<void> {
    const session = state.session;
    if (!session) return;
    try {
      const updated = await client.applyMove(session.id, move);
      await syncHint(updated);
      await refresh(updated);
    } catch (failure) {
      if (failure instanceof ApiFailure) {
        toaster.show(failure.body.error, failure.body.rule);
      } else {
        toaster.show(String(failure));
      }
    }
  }

  async function syncHint(session: SessionJson): Promise<void> {
    if (!session.pinned) return;
    const label = session.pinnedLabel ?? "strategy";
    try {
      const body = await client.hint(session.id);
      state.hint = fromHintResponse(label, body);
    } catch (failure) {
      if (failure instanceof ApiFailure && failure.status === 409) {
        state.hint = afterDivergence(label, failure.body.error);
      }
    }
  }

  newForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      try {
        const params: { game: string; d: number; h: number; granularity?: string } = {
          game: gameSelect.value,
          d: Number(dInput.value),
          h: Number(hInput.value),
        };
        if (granularityInput.value.trim()) params.granularity = granularityInput.value.trim();
        const session = await client.createSession(params);
        state.selected = null;
        state.hint = initialPhase();
        await refresh(session);
      } catch (failure) {
        toaster.show(failure instanceof ApiFailure ? failure.body.error : String(failure));
      }
    })();
  });

  undoButton.addEventListener("click", () => {
    void (async () => {
      const session = state.session;
      if (!session) return;
      try {
        const updated = await client.undo(session.id);
        await syncHint(updated);
        await refresh(updated);
      } catch (failure) {
        if (failure instanceof ApiFailure) toaster.show(failure.body.error, failure.body.rule);
      }
    })();
  });

  pinButton.addEventListener("click", () => {
    void (async () => {
      const session = state.session;
      if (!session) return;
      try {
        const params: { game?: string; epsilon?: string } = { game: session.game };
        if (epsilonInput.value.trim()) params.epsilon = epsilonInput.value.trim();
        const result = await client.pinStrategy(session.id, params);
        toaster.show(
          `pinned ${result.label}: ${result.moves} moves, peak ${result.peak}`,
          undefined,
          "info",
        );
        const updated = await client.getSession(session.id);
        await syncHint(updated);
        await refresh(updated);
      } catch (failure) {
        if (failure instanceof ApiFailure) toaster.show(failure.body.error, failure.body.rule);
      }
    })();
  });

  async function stepOnce(): Promise<boolean> {
    const session = state.session;
    if (!session) return false;
    const body = await client.hint(session.id);
    if (body.done || !body.move) {
      state.hint = fromHintResponse(session.pinnedLabel ?? "strategy", body);
      render();
      return false;
    }
    await play(body.move);
    return state.hint.kind === "tracking";
  }

  stepButton.addEventListener("click", () => void stepOnce());
  runButton.addEventListener("click", () => {
    void (async () => {
      let keepGoing = true;
      while (keepGoing) {
        keepGoing = await stepOnce();
        await new Promise((resolve) => setTimeout(resolve, 120));
      }
    })();
  });
}

start();
