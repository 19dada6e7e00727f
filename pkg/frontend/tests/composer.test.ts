import { describe, expect, it } from "vitest";

import {
  canSend,
  countContentTokens,
  ensureTerminated,
  MAX_UTTERANCE_CHARS,
} from "../src/composer.js";
import { TEST_DICTIONARY } from "./mock.js";

describe("token counter", () => {
  it("counts content tokens, skipping stop words", () => {
    const counted = countContentTokens("the chair is red and curvy", TEST_DICTIONARY, 6);
    // "and" is unknown but still a content token the user spent
    expect(counted.contentTokens).toBe(3);
    expect(counted.overLimit).toBe(false);
  });

  it("blocks seven content tokens at n=6", () => {
    const text = "red blue green thin thick curvy straight";
    const counted = countContentTokens(text, TEST_DICTIONARY, 6);
    expect(counted.contentTokens).toBe(7);
    expect(counted.overLimit).toBe(true);
    expect(canSend(text, TEST_DICTIONARY, 6, false, 90)).toBe(false);
  });

  it("ignores everything after the terminator", () => {
    const counted = countContentTokens("red seat stop blue back thin thick curvy",
                                       TEST_DICTIONARY, 2);
    expect(counted.contentTokens).toBe(2);
    expect(counted.overLimit).toBe(false);
  });

  it("enforces the character cap", () => {
    const text = "curvy ".repeat(40);
    expect(text.length).toBeGreaterThan(MAX_UTTERANCE_CHARS);
    expect(countContentTokens(text, TEST_DICTIONARY, 6).overChars).toBe(true);
    expect(canSend(text, TEST_DICTIONARY, 6, false, 90)).toBe(false);
  });
});

describe("terminator", () => {
  it("appends stop when missing", () => {
    expect(ensureTerminated("red seat", "stop")).toBe("red seat stop");
  });

  it("leaves terminated text alone", () => {
    expect(ensureTerminated("red seat stop", "stop")).toBe("red seat stop");
    expect(ensureTerminated("red stop extra", "stop")).toBe("red stop extra");
  });

  it("handles empty input", () => {
    expect(ensureTerminated("", "stop")).toBe("stop");
  });
});

describe("send gating", () => {
  it("blocks while a query is in flight", () => {
    expect(canSend("red seat", TEST_DICTIONARY, 6, true, 90)).toBe(false);
  });

  it("blocks when the budget is exhausted", () => {
    expect(canSend("red seat", TEST_DICTIONARY, 6, false, 0)).toBe(false);
  });

  it("allows a well-formed query", () => {
    expect(canSend("red seat", TEST_DICTIONARY, 6, false, 42)).toBe(true);
  });
});
