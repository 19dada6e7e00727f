"""Constrained vocabulary for text queries.

The dictionary holds twenty gradable shape concepts (one per style
parameter, in the same order), the six color lemmas, the four part lemmas
with synonyms, negation words, stop-words and the query terminator.  Every
surface form is keyed by its stem so inflected input ("curvier", "legs")
resolves without a full lemmatizer.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ChecksumMismatchError, InvalidInputError, VersionMismatchError
from .palette import ColorId, PartKind

DICTIONARY_VERSION = "1"
TERMINATOR = "stop"

ROLE_PART = "part"
ROLE_COLOR = "color"
ROLE_CONCEPT = "concept"
ROLE_NEGATION = "negation"

# Suffix-stripping rules, applied longest-first; only the first match fires,
# and never when fewer than three characters would remain.
_STEM_RULES: tuple[tuple[str, str], ...] = (
    ("iest", "y"),
    ("ier", "y"),
    ("ies", "y"),
    ("ing", ""),
    ("est", ""),
    ("ed", ""),
    ("er", ""),
    ("es", ""),
    ("s", ""),
)


def stem(token: str) -> str:
    """Reduce an inflected token to its dictionary key."""
    for suffix, replacement in _STEM_RULES:
        if token.endswith(suffix):
            stripped = token[: -len(suffix)]
            if suffix == "s" and token.endswith("ss"):
                continue
            if len(stripped) + len(replacement) >= 3:
                return stripped + replacement
    return token


@dataclass(frozen=True)
class Concept:
    """One gradable attribute: positive synonyms raise it, antonyms lower it."""

    concept_id: int
    canonical: str
    synonyms: tuple[str, ...]
    antonyms: tuple[str, ...]

    def all_lemmas(self) -> tuple[str, ...]:
        return (self.canonical, *self.synonyms, *self.antonyms)


@dataclass(frozen=True)
class Match:
    """Result of looking a stem up: role plus the resolved payload."""

    role: str
    canonical: str
    concept_id: int | None = None
    polarity: int = 0
    color: ColorId | None = None
    part: PartKind | None = None


# (canonical, synonyms, antonyms), aligned index-for-index with the style
# parameters in geometry.StyleParams.
_CONCEPT_TABLE: tuple[tuple[str, tuple[str, ...], tuple[str, ...]], ...] = (
    ("armchair", (), ("armless",)),
    ("wide", (), ("narrow",)),
    ("deep", ("roomy",), ("shallow",)),
    ("padded", ("cushioned", "plush"), ("firm", "hard")),
    ("tall", ("elevated",), ("squat",)),
    ("high", ("lofty",), ("low",)),
    ("broad", (), ("slender",)),
    ("curvy", ("wavy", "curved"), ("straight", "angular")),
    ("reclined", ("tilted", "leaning"), ("upright", "vertical")),
    ("slatted", ("ribbed",), ("solid",)),
    ("thick", ("chunky",), ("thin", "slim", "skinny")),
    ("splayed", ("flared",), ("parallel",)),
    ("pedestal", ("column",), ("legged",)),
    ("braced", ("reinforced",), ("unbraced",)),
    ("long", ("extended",), ("short", "stubby")),
    ("bulky", ("beefy",), ("dainty",)),
    ("raised", ("lifted",), ("lowered",)),
    ("ornate", ("classic", "fancy", "decorated"), ("modern", "plain", "minimal")),
    ("round", ("circular",), ("boxy",)),
    ("skirted", ("aproned",), ("open",)),
)

_PART_LEMMAS: dict[PartKind, tuple[str, tuple[str, ...]]] = {
    PartKind.ARMS: ("arms", ("armrest", "armrests")),
    PartKind.BACK: ("back", ("backrest",)),
    PartKind.SEAT: ("seat", ()),
    PartKind.LEGS: ("legs", ("leg", "base"))
}

_STOP_WORDS = (
    "a", "an", "and", "are", "at", "be", "been", "being", "chair", "chairs",
    "for", "had", "has", "have", "i", "in", "is", "it", "its", "like",
    "make", "more", "much", "my", "now", "of", "on", "or", "please", "that",
    "the", "then", "these", "this", "those", "to", "very", "want", "was",
    "were", "with", "would", "you",
)

_NEGATIONS = ("not", "no", "less")


@dataclass
class Dictionary:
    """Immutable lookup tables for the query parser."""

    concepts: tuple[Concept, ...]
    colors: dict[str, ColorId]
    parts: dict[str, PartKind]
    part_canonical: dict[PartKind, str]
    stop_words: frozenset[str]
    negations: frozenset[str]
    terminator: str = TERMINATOR
    version: str = DICTIONARY_VERSION
    _by_stem: dict[str, Match] = field(default_factory=dict, repr=False)
    _stop_stems: frozenset[str] = field(default_factory=frozenset, repr=False)

    def __post_init__(self) -> None:
        self._by_stem = {}
        self._stop_stems = frozenset(stem(w) for w in self.stop_words)

        def register(key: str, match: Match) -> None:
            k = stem(key)
            if k in self._stop_stems or k == self.terminator:
                raise InvalidInputError(f"dictionary lemma collision on stem {k!r}")
            existing = self._by_stem.get(k)
            if existing is not None and existing != match:
                raise InvalidInputError(f"dictionary lemma collision on stem {k!r}")
            self._by_stem[k] = match

        for concept in self.concepts:
            for lemma in (concept.canonical, *concept.synonyms):
                register(lemma, Match(ROLE_CONCEPT, concept.canonical,
                                      concept_id=concept.concept_id, polarity=1))
            for lemma in concept.antonyms:
                register(lemma, Match(ROLE_CONCEPT, concept.antonyms[0],
                                      concept_id=concept.concept_id, polarity=-1))
        for lemma, color in self.colors.items():
            register(lemma, Match(ROLE_COLOR, lemma, color=color))
        for lemma, part in self.parts.items():
            register(lemma, Match(ROLE_PART, self.part_canonical[part], part=part))
        for lemma in self.negations:
            register(lemma, Match(ROLE_NEGATION, "not"))

    def lookup(self, token_stem: str) -> Match | None:
        return self._by_stem.get(token_stem)

    def is_stop_word(self, token_stem: str) -> bool:
        return token_stem in self._stop_stems

    def concept_by_id(self, concept_id: int) -> Concept:
        return self.concepts[concept_id]

    @property
    def n_concepts(self) -> int:
        return len(self.concepts)

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "terminator": self.terminator,
            "concepts": [
                {
                    "id": c.concept_id,
                    "canonical": c.canonical,
                    "synonyms": list(c.synonyms),
                    "antonyms": list(c.antonyms),
                }
                for c in self.concepts
            ],
            "colors": {lemma: color.label for lemma, color in self.colors.items()},
            "parts": {lemma: part.label for lemma, part in self.parts.items()},
            "stop_words": sorted(self.stop_words),
            "negations": sorted(self.negations),
        }

    @property
    def checksum(self) -> str:
        payload = json.dumps(self.to_document(), sort_keys=True, ensure_ascii=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def save(self, path: str | Path) -> None:
        doc = self.to_document()
        doc["checksum"] = self.checksum
        Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Dictionary":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("version") != DICTIONARY_VERSION:
            raise VersionMismatchError(f"unsupported dictionary version {doc.get('version')!r}")
        concepts = tuple(
            Concept(c["id"], c["canonical"], tuple(c["synonyms"]), tuple(c["antonyms"]))
            for c in doc["concepts"]
        )
        part_lemmas = {lemma: PartKind.from_label(label) for lemma, label in doc["parts"].items()}
        part_canonical = {part: _PART_LEMMAS[part][0] for part in PartKind}
        built = cls(
            concepts=concepts,
            colors={lemma: ColorId.from_label(label) for lemma, label in doc["colors"].items()},
            parts=part_lemmas,
            part_canonical=part_canonical,
            stop_words=frozenset(doc["stop_words"]),
            negations=frozenset(doc["negations"]),
            terminator=doc["terminator"],
        )
        if built.checksum != doc.get("checksum"):
            raise ChecksumMismatchError("dictionary checksum does not match its contents")
        return built


def default_dictionary() -> Dictionary:
    """The built-in twenty-concept dictionary."""
    concepts = tuple(
        Concept(i, canonical, synonyms, antonyms)
        for i, (canonical, synonyms, antonyms) in enumerate(_CONCEPT_TABLE)
    )
    colors = {color.label.lower(): color for color in ColorId}
    parts: dict[str, PartKind] = {}
    part_canonical: dict[PartKind, str] = {}
    for part, (canonical, synonyms) in _PART_LEMMAS.items():
        part_canonical[part] = canonical
        parts[canonical] = part
        for lemma in synonyms:
            parts[lemma] = part
    return Dictionary(
        concepts=concepts,
        colors=colors,
        parts=parts,
        part_canonical=part_canonical,
        stop_words=frozenset(_STOP_WORDS),
        negations=frozenset(_NEGATIONS),
    )
