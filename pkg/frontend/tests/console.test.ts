import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ExperimenterConsole } from "../src/console.js";
import { MockService } from "./mock.js";

function makeConsole() {
  const service = new MockService();
  const api = new ApiClient("", service.fetch);
  return { service, wizard: new ExperimenterConsole(api, "s1") };
}

describe("experimenter console", () => {
  it("steps one concept per click", async () => {
    const { service, wizard } = makeConsole();
    await wizard.stepConcept(7, 1);
    await wizard.stepConcept(7, -1);
    const deltas = service.requests.filter((r) => r.url.endsWith("/experimenter/delta"));
    expect(deltas.map((r) => r.body)).toEqual([
      { concepts: { "7": 1 } },
      { concepts: { "7": -1 } },
    ]);
  });

  it("sets and clears a part color", async () => {
    const { service, wizard } = makeConsole();
    await wizard.setPartColor("Seat", 4);
    await wizard.setPartColor("Seat", null);
    const bodies = service.requests.map((r) => r.body);
    expect(bodies).toEqual([
      { part_colors: { Seat: 4 } },
      { part_colors: { Seat: null } },
    ]);
  });

  it("reset, sync and send each hit their own endpoint once", async () => {
    const { service, wizard } = makeConsole();
    await wizard.reset();
    await wizard.syncToCurrent();
    await wizard.sendDescriptor();
    const tails = service.requests.map((r) => r.url.split("/experimenter/")[1]);
    expect(tails).toEqual(["reset", "sync", "delta"]);
    expect(service.requests[2].body).toEqual({ submit: true });
  });
});
