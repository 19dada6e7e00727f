import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionStore } from "../src/session.js";
import { MockService } from "./mock.js";

function makeStore() {
  const service = new MockService();
  const api = new ApiClient("", service.fetch);
  const store = new SessionStore(api);
  return { service, api, store };
}

const countSubmits = (service: MockService) =>
  service.requests.filter((r) => r.url.endsWith("/queries/voice")).length;

describe("in-flight lock", () => {
  it("a second submit during a pending request emits no request", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    const release = service.holdSubmits();
    const first = store.submitVoice("red seat stop");
    const second = await store.submitVoice("blue back stop");
    expect(second).toBeNull(); // swallowed locally
    release();
    await first;
    expect(countSubmits(service)).toBe(1);
  });

  it("a submit while the panel awaits selection emits no request", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    await store.submitVoice("red seat stop");
    expect(store.state?.in_flight).toBe(true);
    const swallowed = await store.submitVoice("blue back stop");
    expect(swallowed).toBeNull();
    expect(countSubmits(service)).toBe(1);
  });

  it("selection unlocks the next submit", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    await store.submitVoice("red seat stop");
    await store.select(0);
    expect(store.state?.in_flight).toBe(false);
    await store.submitVoice("blue back stop");
    expect(countSubmits(service)).toBe(2);
  });
});

describe("selection", () => {
  it("a select click issues exactly one select request", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    await store.submitVoice("red seat stop");
    await store.select(2);
    const selects = service.requests.filter((r) => r.url.endsWith("/select"));
    expect(selects).toHaveLength(1);
    expect(selects[0].body).toEqual({ rank: 2 });
    expect(store.state?.current_chair_id).toBe(102);
  });

  it("select without a pending panel emits no request", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    expect(await store.select(0)).toBeNull();
    expect(service.requests.filter((r) => r.url.endsWith("/select"))).toHaveLength(0);
  });
});

describe("thin client", () => {
  it("inputs disable when the session leaves the active state", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    service.state = { ...service.state, state: "timed_out", remaining_budget_s: 0 };
    await store.refresh();
    expect(store.inputsEnabled).toBe(false);
    expect(await store.submitVoice("red stop")).toBeNull();
    expect(countSubmits(service)).toBe(0);
  });

  it("never extrapolates budget: state mirrors the server document", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "voice" });
    service.state = { ...service.state, remaining_budget_s: 12.5 };
    await store.refresh();
    expect(store.state?.remaining_budget_s).toBe(12.5);
  });

  it("every user action maps to exactly one endpoint call", async () => {
    const { service, store } = makeStore();
    await store.create({ mode: "hybrid" });
    await store.submitVoice("red seat stop");
    await store.select(1);
    await store.submitSketch(
      [{ points: [[0, 0, 0], [0.5, 0, 0]], color: 0, width: 0.05 }],
      true,
    );
    await store.select(0);
    const paths = service.requests.map((r) => r.url.split("/").slice(-1)[0]);
    expect(paths).toEqual(["sessions", "voice", "select", "sketch", "select"]);
  });
});
