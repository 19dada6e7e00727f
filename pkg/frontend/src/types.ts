// Wire types mirroring docs/api.md. The client never computes descriptors
// or distances itself; it only moves these documents around.

export type Vec3 = [number, number, number];

export interface StrokeWire {
  points: Vec3[];
  color: number; // 0 Red, 1 Green, 2 Blue, 3 Magenta, 4 Yellow, 5 Cyan
  width: number;
}

export interface ResultEntry {
  chair_id: number;
  distance: number;
  snapshot_urls: string[];
}

export interface DescriptorDoc {
  part_colors: Record<string, number | null>;
  levels: number[];
}

export interface SessionState {
  session_id: string;
  state: "active" | "succeeded" | "timed_out" | "abandoned";
  mode: "voice" | "sketch" | "hybrid";
  n_gram: number;
  target_id: number;
  target_snapshot_urls: string[];
  current_chair_id: number;
  current_snapshot_urls: string[];
  remaining_budget_s: number;
  in_flight: boolean;
  query_count: number;
  results: ResultEntry[];
  descriptor: DescriptorDoc;
  log_degraded: boolean;
}

export interface ConceptDoc {
  id: number;
  canonical: string;
  synonyms: string[];
  antonyms: string[];
}

export interface DictionaryDoc {
  version: string;
  terminator: string;
  concepts: ConceptDoc[];
  colors: Record<string, string>;
  parts: Record<string, string>;
  stop_words: string[];
  negations: string[];
  checksum: string;
  n_gram_sizes: number[];
}

export interface ApiError {
  error: { code: string; message: string };
}

export const PALETTE: { code: number; name: string; css: string }[] = [
  { code: 0, name: "Red", css: "#e33" },
  { code: 1, name: "Green", css: "#2b2" },
  { code: 2, name: "Blue", css: "#33e" },
  { code: 3, name: "Magenta", css: "#d3d" },
  { code: 4, name: "Yellow", css: "#dd2" },
  { code: 5, name: "Cyan", css: "#2cc" },
];
