/** Typed fetch client for the engine's HTTP API.  Every helper resolves with
 * the parsed body; non-2xx responses reject with ApiFailure carrying the
 * status and the server's {error, rule} body so the UI can toast citations. */

import { ApiError, MoveJson, SessionJson } from "./moves.js";

export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiError,
  ) {
    super(body.error);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await response.json();
  if (!response.ok) {
    throw new ApiFailure(response.status, body as ApiError);
  }
  return body as T;
}

export interface NewSessionParams {
  game: string;
  d: number;
  h: number;
  granularity?: string;
}

export interface PinResult {
  pinned: boolean;
  label: string;
  moves: number;
  peak: string;
}

export interface LegalMovesJson {
  moves: MoveJson[];
  count: number;
}

export class Client {
  constructor(readonly base: string) {}

  createSession(params: NewSessionParams): Promise<SessionJson> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify(params),
    });
  }

  createSessionFromTrace(trace: unknown): Promise<SessionJson> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify({ trace }),
    });
  }

  getSession(id: string): Promise<SessionJson> {
    return request(`${this.base}/sessions/${id}`);
  }

  applyMove(id: string, move: MoveJson): Promise<SessionJson> {
    return request(`${this.base}/sessions/${id}/moves`, {
      method: "POST",
      body: JSON.stringify(move),
    });
  }

  undo(id: string): Promise<SessionJson> {
    return request(`${this.base}/sessions/${id}/undo`, { method: "POST" });
  }

  legalMoves(id: string): Promise<LegalMovesJson> {
    return request(`${this.base}/sessions/${id}/legal-moves`);
  }

  pinStrategy(
    id: string,
    params: { game?: string; epsilon?: string } | { trace: unknown },
  ): Promise<PinResult> {
    return request(`${this.base}/sessions/${id}/pin-strategy`, {
      method: "POST",
      body: JSON.stringify(params),
    });
  }

  hint(id: string): Promise<{ move?: MoveJson; index?: number; remaining?: number; done?: boolean }> {
    return request(`${this.base}/sessions/${id}/hint`);
  }

  exportTrace(id: string): Promise<unknown> {
    return request(`${this.base}/sessions/${id}/export`);
  }
}
