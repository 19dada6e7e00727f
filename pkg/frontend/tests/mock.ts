// Scripted service mock for the client tests: implements just enough of
// the API, tracks every request, and can hold responses open to expose
// race windows.

import type { DictionaryDoc, SessionState, StrokeWire } from "../src/types.js";
import type { FetchLike } from "../src/api.js";

export const TEST_DICTIONARY: DictionaryDoc = {
  version: "1",
  terminator: "stop",
  concepts: [
    { id: 0, canonical: "curvy", synonyms: ["wavy"], antonyms: ["straight"] },
    { id: 1, canonical: "thick", synonyms: [], antonyms: ["thin"] },
  ],
  colors: { red: "Red", green: "Green", blue: "Blue" },
  parts: { seat: "Seat", back: "Back", legs: "Legs", arms: "Arms" },
  stop_words: ["the", "a", "is", "are", "chair"],
  negations: ["not", "no", "less"],
  checksum: "feedc0de",
  n_gram_sizes: [2, 4, 6],
};

export function baseState(overrides: Partial<SessionState> = {}): SessionState {
  return {
    session_id: "s1",
    state: "active",
    mode: "hybrid",
    n_gram: 6,
    target_id: 17,
    target_snapshot_urls: Array(12).fill("/api/chairs/17/snapshots/0"),
    current_chair_id: -1,
    current_snapshot_urls: Array(12).fill("/api/placeholder/snapshots/0"),
    remaining_budget_s: 90,
    in_flight: false,
    query_count: 0,
    results: [],
    descriptor: { part_colors: { Arms: null, Back: null, Seat: null, Legs: null }, levels: Array(20).fill(2) },
    log_degraded: false,
    ...overrides,
  };
}

export interface Recorded {
  method: string;
  url: string;
  body: any;
}

export class MockService {
  requests: Recorded[] = [];
  state: SessionState = baseState();
  lastStrokes: StrokeWire[] | null = null;
  private _pending: Promise<void> | null = null;

  /** Stall submit handling until the returned release function runs. */
  holdSubmits(): () => void {
    let release!: () => void;
    this._pending = new Promise<void>((resolve) => {
      release = resolve;
    });
    return () => {
      release();
      this._pending = null;
    };
  }

  fetch: FetchLike = async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.requests.push({ method, url, body });

    const json = (doc: unknown, status = 200) =>
      new Response(JSON.stringify(doc), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (url === "/api/dictionary") return json(TEST_DICTIONARY);
    if (url === "/api/sessions" && method === "POST") {
      this.state = baseState({ mode: body.mode ?? "hybrid" });
      return json(this.state, 201);
    }
    if (url.endsWith("/state")) return json(this.state);
    if (url.endsWith("/queries/voice") || url.endsWith("/queries/sketch")) {
      if (this._pending) await this._pending;
      if (this.state.in_flight) {
        return json({ error: { code: "query_in_flight", message: "busy" } }, 409);
      }
      if (url.endsWith("/queries/sketch")) this.lastStrokes = body.strokes;
      this.state = {
        ...this.state,
        in_flight: true,
        results: [0, 1, 2, 3, 4].map((rank) => ({
          chair_id: 100 + rank,
          distance: rank * 0.1,
          snapshot_urls: Array(12).fill(`/api/chairs/${100 + rank}/snapshots/0`),
        })),
      };
      return json(this.state);
    }
    if (url.endsWith("/select")) {
      if (!this.state.in_flight) {
        return json({ error: { code: "no_pending_selection", message: "nothing" } }, 409);
      }
      const chosen = this.state.results[body.rank];
      this.state = {
        ...this.state,
        in_flight: false,
        current_chair_id: chosen.chair_id,
        query_count: this.state.query_count + 1,
      };
      return json(this.state);
    }
    if (url.includes("/experimenter/")) {
      if (url.endsWith("/delta") && body?.submit) {
        this.state = { ...this.state, in_flight: true };
      }
      return json(this.state);
    }
    return json({ error: { code: "not_found", message: url } }, 404);
  };
}
