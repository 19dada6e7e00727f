// Experimenter console actions: raw descriptor steps, per-part colors,
// reset/sync shortcuts, and submitting the hand-built descriptor as a
// query. One action maps to exactly one endpoint call.

import { ApiClient } from "./api.js";
import type { SessionState } from "./types.js";

export class ExperimenterConsole {
  constructor(private api: ApiClient, private sessionId: string) {}

  stepConcept(conceptId: number, delta: 1 | -1): Promise<SessionState> {
    return this.api.experimenterDelta(this.sessionId, {
      concepts: { [String(conceptId)]: delta },
    });
  }

  setPartColor(part: string, color: number | null): Promise<SessionState> {
    return this.api.experimenterDelta(this.sessionId, { part_colors: { [part]: color } });
  }

  sendDescriptor(): Promise<SessionState> {
    return this.api.experimenterDelta(this.sessionId, { submit: true });
  }

  reset(): Promise<SessionState> {
    return this.api.experimenterReset(this.sessionId);
  }

  syncToCurrent(): Promise<SessionState> {
    return this.api.experimenterSync(this.sessionId);
  }
}
