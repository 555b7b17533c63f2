/** End-to-end: the playground client against a real spawned engine service.
 *
 * Covers the shipping criteria for the UI: stepping the generated strategy
 * for the fractional game on the 15-node binary tree to completion shows a
 * peak of exactly 3 and never above; an illegal sliding move is rejected
 * with its rule citation and leaves the session unchanged; and an exported
 * session validates offline (via the CLI, no server) with the same peak.
 */

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client, ApiFailure } from "../../src/api.js";
import { cmp, parseRat } from "../../src/rational.js";
import { sameMove, type MoveJson } from "../../src/moves.js";

const execFileAsync = promisify(execFile);
const PORT = 8791;
const BASE = `http://127.0.0.1:${PORT}`;

let backend: ChildProcess;

async function waitForBackend(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/sessions/does-not-exist`);
      if (response.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("backend did not come up on time");
}

beforeAll(async () => {
  backend = spawn(
    "python3",
    ["-m", "pebblekit.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForBackend();
});

afterAll(() => {
  backend.kill("SIGTERM");
});

describe("strategy step-through on the fractional (d=2, h=4) game", () => {
  it("reaches the root with peak exactly 3 and never above", async () => {
    const client = new Client(BASE);
    let session = await client.createSession({
      game: "fractional",
      d: 2,
      h: 4,
      granularity: "1/4",
    });
    expect(session.bound).toBe("3");

    const pin = await client.pinStrategy(session.id, { game: "fractional" });
    expect(pin.pinned).toBe(true);
    expect(pin.peak).toBe("3");

    const bound = parseRat("3");
    let steps = 0;
    for (;;) {
      const hint = await client.hint(session.id);
      if (hint.done) break;
      expect(hint.index).toBe(steps);
      session = await client.applyMove(session.id, hint.move!);
      steps += 1;
      // never above the bound, at any intermediate configuration
      expect(cmp(parseRat(session.weight), bound) <= 0).toBe(true);
      expect(cmp(parseRat(session.peak), bound) <= 0).toBe(true);
    }
    expect(steps).toBe(pin.moves);
    expect(session.peak).toBe("3");
    expect(session.weight).toBe("0");
    expect(session.classifications["root-pebbling"]).toBe(true);
    expect(session.rootFullTimes.length).toBeGreaterThan(0);
  }, 120_000);
});

describe("illegal move rejection", () => {
  it("cites the violated rule and leaves the session unchanged", async () => {
    const client = new Client(BASE);
    const session = await client.createSession({
      game: "fractional",
      d: 2,
      h: 4,
      granularity: "1/4",
    });
    // one legal move first so the state is not trivially empty
    const before = await client.applyMove(session.id, {
      type: "placeLeafBlack",
      node: 7,
      amount: "3/4",
    });

    const illegal: MoveJson = {
      type: "blackPlaceOrSlide",
      node: 3,
      amount: "3/4",
      childDecreases: { "7": "3/4" },
    };
    let failure: ApiFailure | null = null;
    try {
      await client.applyMove(session.id, illegal);
    } catch (error) {
      failure = error as ApiFailure;
    }
    expect(failure).not.toBeNull();
    expect(failure!.status).toBe(409);
    expect(failure!.body.rule).toBe("rule (ii)");
    expect(failure!.body.error).toContain("rule (ii)");
    expect(failure!.body.error).toContain("pebble value");

    const after = await client.getSession(session.id);
    expect(after.moveCount).toBe(before.moveCount);
    expect(after.config).toEqual(before.config);
    expect(after.weight).toBe(before.weight);
  });
});

describe("export", () => {
  it("validates offline with the identical peak", async () => {
    const client = new Client(BASE);
    let session = await client.createSession({
      game: "fractional",
      d: 2,
      h: 4,
      granularity: "1/4",
    });
    await client.pinStrategy(session.id, { game: "fractional" });
    for (;;) {
      const hint = await client.hint(session.id);
      if (hint.done) break;
      session = await client.applyMove(session.id, hint.move!);
    }

    const exported = await client.exportTrace(session.id);
    const dir = mkdtempSync(join(tmpdir(), "playground-export-"));
    const file = join(dir, "session.json");
    writeFileSync(file, JSON.stringify(exported));

    // offline check: the CLI replays the trace with no server involved
    const { stdout } = await execFileAsync("python3", [
      "-m",
      "pebblekit.cli",
      "validate",
      file,
      "--classify",
      "root-pebbling",
      "--json",
    ]);
    const report = JSON.parse(stdout);
    expect(report.valid).toBe(true);
    expect(report.peak).toBe(session.peak);
    expect(report.moves).toBe(session.moveCount);
    expect(report.classifications["root-pebbling"]).toBe(true);
  }, 120_000);

  it("reimports the exported trace into a fresh equal session", async () => {
    const client = new Client(BASE);
    const session = await client.createSession({ game: "black", d: 2, h: 3 });
    await client.pinStrategy(session.id, {});
    let current = session;
    for (;;) {
      const hint = await client.hint(session.id);
      if (hint.done) break;
      current = await client.applyMove(session.id, hint.move!);
    }
    const exported = (await client.exportTrace(session.id)) as { moves: MoveJson[] };
    const twin = await client.createSessionFromTrace(exported);
    expect(twin.peak).toBe(current.peak);
    expect(twin.moveCount).toBe(current.moveCount);
    // the pinned line and the export describe the same moves
    const replayedFirst = exported.moves[0];
    const hinted = await (async () => {
      const fresh = await client.createSession({ game: "black", d: 2, h: 3 });
      await client.pinStrategy(fresh.id, {});
      return (await client.hint(fresh.id)).move!;
    })();
    expect(sameMove(replayedFirst, hinted)).toBe(true);
  });
});
