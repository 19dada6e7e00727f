"""Bounded discrete semantic descriptor for chairs and voice queries.

Layout: a 4x6 part-color block (one-hot per present part) followed by
twenty concept levels in 0..4.  Flattened form scales levels by 1/4 so the
binary color dims and the concept dims carry comparable weight under
Euclidean distance (LEVEL_SCALE below).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .geometry import LEVEL_MAX, N_STYLE_FIELDS
from .palette import ColorId, N_COLORS, N_PARTS, PartKind

COLOR_BLOCK_DIM = N_PARTS * N_COLORS  # 24
CONCEPT_BLOCK_DIM = N_STYLE_FIELDS  # 20
SEMANTIC_DIM = COLOR_BLOCK_DIM + CONCEPT_BLOCK_DIM  # 44

# Concept levels are divided by this before distance computations.
LEVEL_SCALE = float(LEVEL_MAX)


@dataclass
class AttributeVector:
    part_colors: np.ndarray  # (4, 6) uint8, at most one nonzero per row
    levels: np.ndarray  # (20,) int64 in 0..4

    def __post_init__(self) -> None:
        self.part_colors = np.asarray(self.part_colors, dtype=np.uint8).reshape(N_PARTS, N_COLORS)
        self.levels = np.asarray(self.levels, dtype=np.int64).reshape(CONCEPT_BLOCK_DIM)
        if (self.part_colors.sum(axis=1) > 1).any():
            raise InvalidInputError("part-color block must be one-hot per part")
        if self.levels.min() < 0 or self.levels.max() > LEVEL_MAX:
            raise InvalidInputError("concept levels outside 0..4")

    @classmethod
    def zeros(cls) -> "AttributeVector":
        return cls(np.zeros((N_PARTS, N_COLORS), dtype=np.uint8),
                   np.zeros(CONCEPT_BLOCK_DIM, dtype=np.int64))

    def copy(self) -> "AttributeVector":
        return AttributeVector(self.part_colors.copy(), self.levels.copy())

    def set_part_color(self, part: PartKind, color: ColorId) -> None:
        self.part_colors[int(part)] = 0
        self.part_colors[int(part), int(color)] = 1

    def clear_part(self, part: PartKind) -> None:
        self.part_colors[int(part)] = 0

    def part_color(self, part: PartKind) -> ColorId | None:
        row = self.part_colors[int(part)]
        hits = np.flatnonzero(row)
        return ColorId(int(hits[0])) if len(hits) else None

    def bump(self, concept_id: int, delta: int) -> None:
        """Step one concept level, clamped to 0..4."""
        v = int(self.levels[concept_id]) + delta
        self.levels[concept_id] = min(LEVEL_MAX, max(0, v))

    def flatten(self) -> np.ndarray:
        """44-dim float vector: color one-hots then levels / LEVEL_SCALE."""
        out = np.empty(SEMANTIC_DIM, dtype=np.float64)
        out[:COLOR_BLOCK_DIM] = self.part_colors.reshape(-1)
        out[COLOR_BLOCK_DIM:] = self.levels / LEVEL_SCALE
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttributeVector):
            return NotImplemented
        return bool((self.part_colors == other.part_colors).all()
                    and (self.levels == other.levels).all())
