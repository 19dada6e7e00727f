// Thin typed client over the session API. fetch is injectable so tests
// run against a scripted mock; every emitted request is recorded so a
// session can be audited or replayed.

import type { DictionaryDoc, SessionState, StrokeWire } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface RequestLogEntry {
  method: string;
  url: string;
  body?: unknown;
}

export class ApiClientError extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

export class ApiClient {
  readonly requestLog: RequestLogEntry[] = [];

  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const url = this.baseUrl + path;
    this.requestLog.push({ method, url, body });
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchImpl(url, init);
    const doc = await response.json();
    if (!response.ok) {
      const code = doc?.error?.code ?? "error";
      const message = doc?.error?.message ?? response.statusText;
      throw new ApiClientError(code, message, response.status);
    }
    return doc as T;
  }

  createSession(body: {
    mode: string;
    target_id?: number;
    random_target?: boolean;
    n_gram?: number;
    seed?: number;
  }): Promise<SessionState> {
    return this.request("POST", "/api/sessions", body);
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/api/sessions/${sessionId}/state`);
  }

  submitVoice(sessionId: string, text: string): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${sessionId}/queries/voice`, { text });
  }

  submitSketch(
    sessionId: string,
    strokes: StrokeWire[],
    includeCurrentModel: boolean,
  ): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${sessionId}/queries/sketch`, {
      strokes,
      include_current_model: includeCurrentModel,
    });
  }

  select(sessionId: string, rank: number): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${sessionId}/select`, { rank });
  }

  getDictionary(): Promise<DictionaryDoc> {
    return this.request("GET", "/api/dictionary");
  }

  experimenterDelta(
    sessionId: string,
    body: {
      concepts?: Record<string, number>;
      part_colors?: Record<string, number | null>;
      submit?: boolean;
    },
  ): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${sessionId}/experimenter/delta`, body);
  }

  experimenterReset(sessionId: string): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${sessionId}/experimenter/reset`);
  }

  experimenterSync(sessionId: string): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${sessionId}/experimenter/sync`);
  }
}
