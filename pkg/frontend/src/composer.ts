// Voice query composition: a live content-token counter against the
// session's n-gram limit, and automatic termination with "stop".
//
// Counting mirrors the server's tokenizer closely enough for UI gating:
// lowercase alphanumeric tokens, stop words skipped, everything after
// the terminator ignored. The server remains the authority.

import type { DictionaryDoc } from "./types.js";

export const MAX_UTTERANCE_CHARS = 200;

export function tokenize(text: string): string[] {
  return text
    .toLowerCase()
    .replace(/[^a-z0-9]+/g, " ")
    .split(" ")
    .filter((t) => t.length > 0);
}

export interface CountResult {
  contentTokens: number;
  limit: number;
  overLimit: boolean;
  overChars: boolean;
}

export function countContentTokens(
  text: string,
  dictionary: DictionaryDoc,
  nGram: number,
): CountResult {
  const stops = new Set(dictionary.stop_words);
  let count = 0;
  for (const token of tokenize(text)) {
    if (token === dictionary.terminator) break;
    if (stops.has(token)) continue;
    count += 1;
  }
  return {
    contentTokens: count,
    limit: nGram,
    overLimit: count > nGram,
    overChars: text.length > MAX_UTTERANCE_CHARS,
  };
}

/** Append the terminator unless the text already ends with it. */
export function ensureTerminated(text: string, terminator: string): string {
  const tokens = tokenize(text);
  if (tokens.includes(terminator)) return text;
  return text.trim().length > 0 ? `${text.trim()} ${terminator}` : terminator;
}

export function canSend(
  text: string,
  dictionary: DictionaryDoc,
  nGram: number,
  inFlight: boolean,
  remainingBudget: number,
): boolean {
  const counted = countContentTokens(text, dictionary, nGram);
  return !counted.overLimit && !counted.overChars && !inFlight && remainingBudget > 0;
}
