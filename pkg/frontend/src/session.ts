// Client-side session store: polling, the in-flight lock, and submit
// wrappers. The server state is authoritative; the store only mirrors it
// and guards against double submits between polls.

import { ApiClient } from "./api.js";
import { serializeStrokes, LocalStroke } from "./strokes.js";
import type { SessionState } from "./types.js";

export const POLL_INTERVAL_MS = 500;

export type Listener = (state: SessionState) => void;

export class SessionStore {
  state: SessionState | null = null;
  private submitting = false;
  private listeners: Listener[] = [];
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(private api: ApiClient) {}

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private apply(state: SessionState): SessionState {
    this.state = state;
    for (const listener of this.listeners) listener(state);
    return state;
  }

  get sessionId(): string {
    if (!this.state) throw new Error("no active session");
    return this.state.session_id;
  }

  /** True while a submit is pending locally or a query awaits selection. */
  get locked(): boolean {
    return this.submitting || Boolean(this.state?.in_flight);
  }

  get inputsEnabled(): boolean {
    return Boolean(
      this.state && this.state.state === "active" && this.state.remaining_budget_s > 0,
    );
  }

  async create(body: {
    mode: string;
    target_id?: number;
    random_target?: boolean;
    n_gram?: number;
  }): Promise<SessionState> {
    return this.apply(await this.api.createSession(body));
  }

  async refresh(): Promise<SessionState> {
    return this.apply(await this.api.getState(this.sessionId));
  }

  startPolling(intervalMs: number = POLL_INTERVAL_MS): void {
    this.stopPolling();
    this.timer = setInterval(() => {
      this.refresh().catch(() => {
        /* poll failures leave the last state visible as stale */
      });
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private async guarded(run: () => Promise<SessionState>): Promise<SessionState | null> {
    if (this.locked || !this.inputsEnabled) return null;
    this.submitting = true;
    try {
      return this.apply(await run());
    } finally {
      this.submitting = false;
    }
  }

  /** Submit a voice query; returns null when the lock swallowed the call. */
  submitVoice(text: string): Promise<SessionState | null> {
    return this.guarded(() => this.api.submitVoice(this.sessionId, text));
  }

  submitSketch(
    strokes: LocalStroke[],
    includeCurrentModel: boolean,
  ): Promise<SessionState | null> {
    return this.guarded(() =>
      this.api.submitSketch(this.sessionId, serializeStrokes(strokes), includeCurrentModel),
    );
  }

  /** Selection resolves the pending query; it bypasses the in-flight lock. */
  async select(rank: number): Promise<SessionState | null> {
    if (this.submitting || !this.state || !this.state.in_flight) return null;
    this.submitting = true;
    try {
      return this.apply(await this.api.select(this.sessionId, rank));
    } finally {
      this.submitting = false;
    }
  }
}
