"""Parametric chair construction from normalized style parameters.

Chairs are assembled from boxes and box-like prisms, one triangle soup per
part.  All twenty style parameters live in [0, 1]; each one maps to a
discrete attribute level 0..4 (thresholds at 0.2 steps) and has a visible
geometric effect, so shapes with different level tuples render differently.
The finished chair is recentered on the origin and uniformly scaled so its
largest extent is 0.96, keeping it inside the unit cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import InvalidInputError
from .palette import PartKind

LEVELS = 5
LEVEL_MAX = LEVELS - 1
CHAIR_EXTENT = 0.96


@dataclass(frozen=True)
class StyleParams:
    """Normalized style knobs, one per dictionary concept (same order)."""

    arm_presence: float = 0.5
    seat_width: float = 0.5
    seat_depth: float = 0.5
    seat_thickness: float = 0.5
    seat_height: float = 0.5
    back_height: float = 0.5
    back_width: float = 0.5
    back_curvature: float = 0.5
    back_recline: float = 0.5
    back_slats: float = 0.5
    leg_thickness: float = 0.5
    leg_splay: float = 0.5
    leg_style: float = 0.5
    leg_bracing: float = 0.5
    arm_length: float = 0.5
    arm_thickness: float = 0.5
    arm_height: float = 0.5
    ornament: float = 0.5
    seat_roundness: float = 0.5
    apron_depth: float = 0.5

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not 0.0 <= v <= 1.0:
                raise InvalidInputError(f"style parameter {f.name}={v} outside [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.float64)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_array(cls, values: np.ndarray) -> "StyleParams":
        names = cls.field_names()
        if len(values) != len(names):
            raise InvalidInputError(f"expected {len(names)} style values, got {len(values)}")
        return cls(**{n: float(v) for n, v in zip(names, values)})

    @classmethod
    def from_levels(cls, levels: np.ndarray) -> "StyleParams":
        """Style whose parameters sit at the centers of the given levels."""
        levels = np.asarray(levels)
        if levels.shape != (len(cls.field_names()),):
            raise InvalidInputError("level tuple has wrong length")
        if levels.min() < 0 or levels.max() > LEVEL_MAX:
            raise InvalidInputError("levels outside 0..4")
        return cls.from_array((levels + 0.5) / LEVELS)


STYLE_FIELDS = StyleParams.field_names()
N_STYLE_FIELDS = len(STYLE_FIELDS)


def attribute_levels(style: StyleParams) -> np.ndarray:
    """Discretize style parameters to levels 0..4 (thresholds 0.2/0.4/0.6/0.8)."""
    values = style.as_array()
    return np.minimum((values * LEVELS).astype(np.int64), LEVEL_MAX)


@dataclass
class PartMesh:
    """Triangle soup for one chair part, in chair-local units."""

    vertices: np.ndarray  # (V, 3) float64
    triangles: np.ndarray  # (T, 3) int32

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int32).reshape(-1, 3)
        if len(self.vertices) == 0 or len(self.triangles) == 0:
            raise InvalidInputError("part mesh must be non-empty")
        if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
            raise InvalidInputError("triangle index out of range")

    def copy(self) -> "PartMesh":
        return PartMesh(self.vertices.copy(), self.triangles.copy())


class _MeshBuilder:
    def __init__(self) -> None:
        self._verts: list[np.ndarray] = []
        self._tris: list[np.ndarray] = []
        self._count = 0

    def add(self, vertices: np.ndarray, triangles: np.ndarray) -> None:
        self._verts.append(np.asarray(vertices, dtype=np.float64))
        self._tris.append(np.asarray(triangles, dtype=np.int32) + self._count)
        self._count += len(vertices)

    def box(self, center: tuple[float, float, float], size: tuple[float, float, float]) -> None:
        cx, cy, cz = center
        hx, hy, hz = size[0] / 2.0, size[1] / 2.0, size[2] / 2.0
        corners = np.array(
            [
                [cx - hx, cy - hy, cz - hz],
                [cx + hx, cy - hy, cz - hz],
                [cx + hx, cy + hy, cz - hz],
                [cx - hx, cy + hy, cz - hz],
                [cx - hx, cy - hy, cz + hz],
                [cx + hx, cy - hy, cz + hz],
                [cx + hx, cy + hy, cz + hz],
                [cx - hx, cy + hy, cz + hz],
            ]
        )
        self.add(corners, _BOX_TRIS)

    def skewed_box(self, top: tuple[float, float], bottom: tuple[float, float],
                   y0: float, y1: float, half: float) -> None:
        """Vertical box whose top/bottom squares are centered independently."""
        bx, bz = bottom
        tx, tz = top
        corners = np.array(
            [
                [bx - half, y0, bz - half],
                [bx + half, y0, bz - half],
                [bx + half, y0, bz + half],
                [bx - half, y0, bz + half],
                [tx - half, y1, tz - half],
                [tx + half, y1, tz - half],
                [tx + half, y1, tz + half],
                [tx - half, y1, tz + half],
            ]
        )
        tris = np.array(
            [
                [0, 2, 1], [0, 3, 2],  # bottom
                [4, 5, 6], [4, 6, 7],  # top
                [0, 1, 5], [0, 5, 4],
                [1, 2, 6], [1, 6, 5],
                [2, 3, 7], [2, 7, 6],
                [3, 0, 4], [3, 4, 7],
            ]
        )
        self.add(corners, tris)

    def prism(self, polygon_xz: np.ndarray, y0: float, y1: float) -> None:
        """Extrude a convex xz polygon (CCW) from y0 to y1, fan-capped."""
        n = len(polygon_xz)
        cx, cz = polygon_xz.mean(axis=0)
        bottom = np.column_stack([polygon_xz[:, 0], np.full(n, y0), polygon_xz[:, 1]])
        top = np.column_stack([polygon_xz[:, 0], np.full(n, y1), polygon_xz[:, 1]])
        verts = np.vstack([bottom, top, [[cx, y0, cz]], [[cx, y1, cz]]])
        tris = []
        cb, ct = 2 * n, 2 * n + 1
        for i in range(n):
            j = (i + 1) % n
            tris.append([cb, j, i])            # bottom cap
            tris.append([ct, n + i, n + j])    # top cap
            tris.append([i, j, n + j])         # side
            tris.append([i, n + j, n + i])
        self.add(verts, np.array(tris))

    def build(self) -> PartMesh:
        return PartMesh(np.vstack(self._verts), np.vstack(self._tris))


_BOX_TRIS = np.array(
    [
        [0, 2, 1], [0, 3, 2],
        [4, 5, 6], [4, 6, 7],
        [0, 1, 5], [0, 5, 4],
        [1, 2, 6], [1, 6, 5],
        [2, 3, 7], [2, 7, 6],
        [3, 0, 4], [3, 4, 7],
    ]
)


@dataclass
class ChairShape:
    """A chair geometry: per-part meshes plus the style they derive from."""

    shape_id: int
    parts: dict[PartKind, PartMesh]
    style: StyleParams
    attributes: np.ndarray  # (20,) levels 0..4, aligned with STYLE_FIELDS

    def __post_init__(self) -> None:
        self.attributes = np.asarray(self.attributes, dtype=np.int64).reshape(N_STYLE_FIELDS)
        for part in (PartKind.BACK, PartKind.SEAT, PartKind.LEGS):
            if part not in self.parts:
                raise InvalidInputError(f"shape {self.shape_id} is missing required part {part.label}")

    @property
    def present_parts(self) -> tuple[PartKind, ...]:
        return tuple(sorted(self.parts, key=int))


def _seat_polygon(half_w: float, half_d: float, chamfer: float) -> np.ndarray:
    c = min(chamfer, half_w * 0.95, half_d * 0.95)
    return np.array(
        [
            [-half_w + c, -half_d],
            [half_w - c, -half_d],
            [half_w, -half_d + c],
            [half_w, half_d - c],
            [half_w - c, half_d],
            [-half_w + c, half_d],
            [-half_w, half_d - c],
            [-half_w, -half_d + c],
        ]
    )


def generate_parametric_shape(style: StyleParams, shape_id: int) -> ChairShape:
    """Build a chair from style parameters; deterministic for equal inputs."""
    s = style
    levels = attribute_levels(style)

    seat_w = 0.50 + 0.30 * s.seat_width
    seat_d = 0.42 + 0.28 * s.seat_depth
    seat_t = 0.035 + 0.065 * s.seat_thickness
    leg_len = 0.22 + 0.16 * s.seat_height
    back_h = 0.24 + 0.24 * s.back_height
    back_w = seat_w * (0.55 + 0.45 * s.back_width)
    back_t = 0.035
    leg_w = 0.030 + 0.045 * s.leg_thickness

    seat_top = leg_len + seat_t
    chamfer = 0.35 * s.seat_roundness * min(seat_w, seat_d)

    # --- seat (+ apron skirt) ---
    seat = _MeshBuilder()
    seat.prism(_seat_polygon(seat_w / 2, seat_d / 2, chamfer), leg_len, seat_top)
    apron_level = int(levels[STYLE_FIELDS.index("apron_depth")])
    if apron_level >= 1:
        drop = 0.13 * s.apron_depth
        t = 0.018
        y0, y1 = leg_len - drop, leg_len
        in_w, in_d = seat_w / 2 - 0.03, seat_d / 2 - 0.03
        for cx, cz, sx, sz in (
            (0.0, -in_d, 2 * in_w, t),
            (0.0, in_d, 2 * in_w, t),
            (-in_w, 0.0, t, 2 * in_d),
            (in_w, 0.0, t, 2 * in_d),
        ):
            seat.box((cx, (y0 + y1) / 2, cz), (sx, y1 - y0, sz))

    # --- legs (+ stretcher bracing) ---
    legs = _MeshBuilder()
    inset = leg_w / 2 + 0.012 + chamfer * 0.4
    top_x = seat_w / 2 - inset
    top_z = seat_d / 2 - inset
    center_pull = 1.0 - s.leg_style  # 1 = corner legs, 0 = merged center column
    splay = 1.0 + 0.45 * s.leg_splay
    leg_tops = [
        (sx * top_x * center_pull, sz * top_z * center_pull)
        for sx in (-1.0, 1.0)
        for sz in (-1.0, 1.0)
    ]
    for tx, tz in leg_tops:
        legs.skewed_box((tx, tz), (tx * splay, tz * splay), 0.0, leg_len, leg_w / 2)
    bracing_level = int(levels[STYLE_FIELDS.index("leg_bracing")])
    if bracing_level >= 1:
        bar_y = leg_len * (0.18 + 0.5 * s.leg_bracing)
        bar = 0.45 * leg_w
        span_x = top_x * center_pull
        span_z = top_z * center_pull
        if span_x > bar and span_z > bar:
            for cz in (-span_z, span_z):
                legs.box((0.0, bar_y, cz), (2 * span_x, bar, bar))
            for cx in (-span_x, span_x):
                legs.box((cx, bar_y, 0.0), (bar, bar, 2 * span_z))

    # --- back: slatted boards following recline and curvature (+ top knobs) ---
    back = _MeshBuilder()
    slat_level = int(levels[STYLE_FIELDS.index("back_slats")])
    n_boards = 1 if slat_level == 0 else slat_level + 1
    board_w = back_w / (2 * n_boards - 1)
    recline_slope = 0.45 * s.back_recline
    curve = 0.16 * s.back_curvature
    base_z = seat_d / 2 - back_t / 2
    n_slices = 6
    board_centers = [(-back_w / 2 + board_w / 2 + i * 2 * board_w) for i in range(n_boards)]
    for bx in board_centers:
        for k in range(n_slices):
            y0 = seat_top + back_h * k / n_slices
            y1 = seat_top + back_h * (k + 1) / n_slices
            ym = (y0 + y1) / 2 - seat_top
            zc = base_z + recline_slope * ym + curve * math.sin(math.pi * ym / back_h)
            back.box((bx, (y0 + y1) / 2, zc), (board_w, y1 - y0, back_t))
    ornament_level = int(levels[STYLE_FIELDS.index("ornament")])
    if ornament_level >= 1:
        knob = 0.042
        knob_y = seat_top + back_h + knob / 2
        knob_z = base_z + recline_slope * back_h
        if ornament_level == 1:
            xs = [0.0]
        else:
            xs = list(np.linspace(-back_w / 2 + knob, back_w / 2 - knob, ornament_level))
        for x in xs:
            back.box((x, knob_y, knob_z), (knob, knob, knob))

    parts: dict[PartKind, PartMesh] = {
        PartKind.SEAT: seat.build(),
        PartKind.LEGS: legs.build(),
        PartKind.BACK: back.build(),
    }

    # --- arms: side pads on front/rear posts ---
    if s.arm_presence >= 0.5:
        arms = _MeshBuilder()
        pad = 0.025 + 0.05 * s.arm_thickness
        arm_y = seat_top + 0.09 + 0.11 * s.arm_height
        arm_len = seat_d * (0.45 + 0.5 * s.arm_length)
        z_rear = seat_d / 2 - pad / 2
        z_front = z_rear - arm_len
        for side in (-1.0, 1.0):
            x = side * (seat_w / 2 - pad / 2)
            arms.box((x, arm_y, (z_front + z_rear) / 2), (pad, pad, arm_len))
            post = 0.7 * pad
            for z in (z_front + post, z_rear - post):
                arms.box((x, (seat_top + arm_y) / 2, z), (post, arm_y - seat_top, post))
        parts[PartKind.ARMS] = arms.build()

    _normalize_parts(parts)
    return ChairShape(shape_id=shape_id, parts=parts, style=style, attributes=levels)


def _normalize_parts(parts: dict[PartKind, PartMesh]) -> None:
    """Recenter the assembly on the origin and scale to CHAIR_EXTENT."""
    all_verts = np.vstack([m.vertices for m in parts.values()])
    lo, hi = all_verts.min(axis=0), all_verts.max(axis=0)
    center = (lo + hi) / 2.0
    extent = float((hi - lo).max())
    scale = CHAIR_EXTENT / extent if extent > 0 else 1.0
    for mesh in parts.values():
        mesh.vertices = (mesh.vertices - center) * scale
