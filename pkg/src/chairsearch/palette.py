"""Part and color vocabularies shared across the whole system.

Every chair is segmented into at most four parts, and every present part
carries exactly one of six palette colors.  Integer codes are stable and
used for ordering, serialization and vector layouts everywhere else.
"""

from __future__ import annotations

from enum import IntEnum


class PartKind(IntEnum):
    """The four chair components that can be colored independently."""

    ARMS = 0
    BACK = 1
    SEAT = 2
    LEGS = 3

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, label: str) -> "PartKind":
        return cls[label.upper()]


class ColorId(IntEnum):
    """Six-color palette: the pure primaries and secondaries."""

    RED = 0
    GREEN = 1
    BLUE = 2
    MAGENTA = 3
    YELLOW = 4
    CYAN = 5

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, label: str) -> "ColorId":
        return cls[label.upper()]


# Linear-RGB triples per palette entry.
COLOR_RGB: dict[ColorId, tuple[float, float, float]] = {
    ColorId.RED: (1.0, 0.0, 0.0),
    ColorId.GREEN: (0.0, 1.0, 0.0),
    ColorId.BLUE: (0.0, 0.0, 1.0),
    ColorId.MAGENTA: (1.0, 0.0, 1.0),
    ColorId.YELLOW: (1.0, 1.0, 0.0),
    ColorId.CYAN: (0.0, 1.0, 1.0),
}

# Back, Seat and Legs are mandatory; Arms may be absent.
REQUIRED_PARTS: tuple[PartKind, ...] = (PartKind.BACK, PartKind.SEAT, PartKind.LEGS)

ALL_PARTS: tuple[PartKind, ...] = tuple(PartKind)
ALL_COLORS: tuple[ColorId, ...] = tuple(ColorId)

N_PARTS = len(ALL_PARTS)
N_COLORS = len(ALL_COLORS)
