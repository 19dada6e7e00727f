"""Text utterances -> incremental attribute-vector updates.

The pipeline mirrors a constrained speech channel: tokenize, drop stop
words, stem, resolve against the dictionary, group into chunks of at most
n content lemmas, then apply the chunks to the running attribute vector.
Color words only take effect next to a part word in the same chunk;
concept words step their level by one, antonyms and negated mentions step
it down, and levels clamp to 0..4.  Processing always ends at the first
terminator token, so anything after "stop" is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import ChairInstance, DatasetManifest, semantic_vector
from .dictionary import (
    Dictionary,
    ROLE_COLOR,
    ROLE_CONCEPT,
    ROLE_NEGATION,
    ROLE_PART,
    stem,
)
from .errors import InvalidInputError
from .vectors import AttributeVector

NGRAM_SIZES = (2, 4, 6)
MAX_UTTERANCE_CHARS = 200  # stand-in for the ten-second spoken-query cap


@dataclass
class ParsedUtterance:
    """Canonical (lemma, role) pairs plus parse diagnostics."""

    pairs: list[tuple[str, str]]
    unknown_count: int = 0
    terminated: bool = False


@dataclass
class QueryChunk:
    tokens: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.tokens)


def _tokenize(text: str) -> list[str]:
    cleaned = "".join(ch if ch.isalnum() else " " for ch in text.lower())
    return cleaned.split()


def normalize(text: str, dictionary: Dictionary) -> ParsedUtterance:
    """Tokenize, truncate at the terminator, stem and tag each token."""
    result = ParsedUtterance(pairs=[])
    for token in _tokenize(text):
        if token == dictionary.terminator:
            result.terminated = True
            break
        s = stem(token)
        if dictionary.is_stop_word(s):
            continue
        match = dictionary.lookup(s)
        if match is None:
            result.unknown_count += 1
            continue
        result.pairs.append((match.canonical, match.role))
    return result


def _protected_pair(first: tuple[str, str], second: tuple[str, str]) -> bool:
    return (first[1] == ROLE_NEGATION and second[1] == ROLE_CONCEPT) or (
        first[1] == ROLE_COLOR and second[1] == ROLE_PART)


def segment(pairs: list[tuple[str, str]], n: int) -> list[QueryChunk]:
    """Greedy left-to-right chunks of at most n lemmas.

    A (negation, concept) or (color, part) adjacency never straddles a
    chunk boundary: if only one slot remains, the chunk closes early.
    """
    if n not in NGRAM_SIZES:
        raise InvalidInputError(f"n-gram size must be one of {NGRAM_SIZES}")
    chunks: list[QueryChunk] = []
    current: list[tuple[str, str]] = []
    for i, pair in enumerate(pairs):
        if len(current) == n:
            chunks.append(QueryChunk(tuple(current)))
            current = []
        elif (
            len(current) == n - 1
            and i + 1 < len(pairs)
            and _protected_pair(pair, pairs[i + 1])
        ):
            chunks.append(QueryChunk(tuple(current)))
            current = []
        current.append(pair)
    if current:
        chunks.append(QueryChunk(tuple(current)))
    return chunks


def interpret(chunks: list[QueryChunk], current: AttributeVector,
              dictionary: Dictionary, stats: dict | None = None) -> AttributeVector:
    """Apply chunk updates to a copy of the current attribute vector."""
    vec = current.copy()
    ambiguous = 0
    for chunk in chunks:
        tokens = chunk.tokens
        part_positions = [i for i, (_, role) in enumerate(tokens) if role == ROLE_PART]
        for i, (lemma, role) in enumerate(tokens):
            if role == ROLE_COLOR:
                if not part_positions:
                    ambiguous += 1
                    continue
                # ties prefer the part after the color ("red seat blue back")
                nearest = min(part_positions, key=lambda p: (abs(p - i), p < i))
                part = dictionary.lookup(stem(tokens[nearest][0])).part
                color = dictionary.lookup(stem(lemma)).color
                vec.set_part_color(part, color)
            elif role == ROLE_CONCEPT:
                match = dictionary.lookup(stem(lemma))
                direction = match.polarity
                if i > 0 and tokens[i - 1][1] == ROLE_NEGATION:
                    direction = -direction
                vec.bump(match.concept_id, direction)
    if stats is not None:
        stats["ambiguous_colors"] = ambiguous
    return vec


def apply_utterance(text: str, current: AttributeVector, dictionary: Dictionary,
                    n: int, stats: dict | None = None) -> AttributeVector:
    """normalize -> segment -> interpret in one step."""
    parsed = normalize(text, dictionary)
    if stats is not None:
        stats["unknown_tokens"] = parsed.unknown_count
    return interpret(segment(parsed.pairs, n), current, dictionary, stats=stats)


def sync_from_selection(chair: ChairInstance, manifest: DatasetManifest,
                        dictionary: Dictionary) -> AttributeVector:
    """Reset the running vector to the selected chair's ground truth."""
    return semantic_vector(chair, manifest, dictionary)
