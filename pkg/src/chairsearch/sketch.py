"""Colored 3D stroke sketches, fixed-view snapshots and visual descriptors.

Scenes (strokes and/or a colored chair) are rendered by a small software
rasterizer into 128x128 class grids: class 0 is background, classes 1..6
are the palette colors.  Twelve orthographic cameras ring the working
volume at 30 degree azimuth steps, all at 30 degrees elevation, looking at
the volume center.  Each snapshot is encoded as per-cell color-class
occupancy fractions on an 8x8 grid (448 dims) and the twelve view vectors
are max-pooled into one order-invariant descriptor.

All arithmetic is plain float64 with a fixed triangle/segment order and
strict-greater depth updates, so identical scenes rasterize identically.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import ChairInstance, ColorAssignment, DatasetManifest
from .errors import InvalidInputError
from .geometry import ChairShape
from .palette import COLOR_RGB, ColorId, PartKind

RESOLUTION = 128
GRID = 8
CELL = RESOLUTION // GRID
N_VIEWS = 12
N_CLASSES = 7  # background + six colors
DESCRIPTOR_DIM = GRID * GRID * N_CLASSES  # 448
ELEVATION_DEG = 30.0
HALF_EXTENT = 1.0
WORKING_VOLUME = 1.5  # strokes live in [-1.5, 1.5]^3
PX_PER_UNIT = RESOLUTION / (2.0 * HALF_EXTENT)


@dataclass(frozen=True)
class Stroke:
    """One colored polyline with a world-space width."""

    points: np.ndarray  # (P, 3) float64
    color: ColorId
    width: float

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise InvalidInputError("stroke needs at least two points")
        if self.width <= 0:
            raise InvalidInputError("stroke width must be positive")
        if np.abs(pts).max() > WORKING_VOLUME:
            raise InvalidInputError("stroke leaves the working volume")


@dataclass(frozen=True)
class Sketch:
    strokes: tuple[Stroke, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "strokes", tuple(self.strokes))

    @property
    def is_empty(self) -> bool:
        return len(self.strokes) == 0


@dataclass(frozen=True)
class ViewCamera:
    view_index: int
    azimuth_deg: float
    elevation_deg: float = ELEVATION_DEG
    half_extent: float = HALF_EXTENT

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(right, up, toward-camera) unit vectors; projection is p . basis."""
        az = math.radians(self.azimuth_deg)
        el = math.radians(self.elevation_deg)
        eye = np.array([math.sin(az) * math.cos(el), math.sin(el), math.cos(az) * math.cos(el)])
        forward = -eye
        world_up = np.array([0.0, 1.0, 0.0])
        right = np.cross(forward, world_up)
        right /= np.linalg.norm(right)
        up = np.cross(right, forward)
        return right, up, eye


VIEW_CAMERAS: tuple[ViewCamera, ...] = tuple(
    ViewCamera(view_index=i, azimuth_deg=30.0 * i) for i in range(N_VIEWS)
)


@dataclass
class Snapshot:
    """Fixed-resolution grid of color-class values (0 = background)."""

    classes: np.ndarray  # (RESOLUTION, RESOLUTION) uint8

    def __post_init__(self) -> None:
        self.classes = np.asarray(self.classes, dtype=np.uint8)
        if self.classes.shape != (RESOLUTION, RESOLUTION):
            raise InvalidInputError("snapshot must be 128x128")

    @property
    def width(self) -> int:
        return RESOLUTION

    @property
    def height(self) -> int:
        return RESOLUTION


@dataclass(frozen=True)
class ChairModel:
    """Renderable chair: geometry plus its part coloring."""

    shape: ChairShape
    assignment: ColorAssignment

    @classmethod
    def from_instance(cls, manifest: DatasetManifest, instance: ChairInstance) -> "ChairModel":
        return cls(manifest.shape_by_id(instance.shape_id), instance.assignment)


def _project(camera: ViewCamera, points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """World points -> (x_px, y_px, depth); larger depth is nearer."""
    right, up, eye = camera.basis()
    u = points @ right
    v = points @ up
    depth = points @ eye
    he = camera.half_extent
    x = (u + he) / (2.0 * he) * RESOLUTION
    y = (he - v) / (2.0 * he) * RESOLUTION
    return x, y, depth


class _Raster:
    """Depth-buffered label raster for one view."""

    def __init__(self) -> None:
        self.labels = np.zeros((RESOLUTION, RESOLUTION), dtype=np.uint8)
        self.depth = np.full((RESOLUTION, RESOLUTION), -np.inf)

    def _bbox(self, xs: np.ndarray, ys: np.ndarray, pad: float = 0.0):
        x0 = max(int(math.floor(xs.min() - pad - 0.5)), 0)
        x1 = min(int(math.ceil(xs.max() + pad - 0.5)), RESOLUTION - 1)
        y0 = max(int(math.floor(ys.min() - pad - 0.5)), 0)
        y1 = min(int(math.ceil(ys.max() + pad - 0.5)), RESOLUTION - 1)
        if x0 > x1 or y0 > y1:
            return None
        return x0, x1, y0, y1

    def triangle(self, x: np.ndarray, y: np.ndarray, d: np.ndarray, label: int) -> None:
        area = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0])
        if area == 0.0:
            return
        if area < 0.0:  # reorient to CCW in pixel space
            x = x[[0, 2, 1]]
            y = y[[0, 2, 1]]
            d = d[[0, 2, 1]]
            area = -area
        box = self._bbox(x, y)
        if box is None:
            return
        x0, x1, y0, y1 = box
        px = np.arange(x0, x1 + 1) + 0.5
        py = (np.arange(y0, y1 + 1) + 0.5)[:, None]
        w0 = (x[2] - x[1]) * (py - y[1]) - (y[2] - y[1]) * (px - x[1])
        w1 = (x[0] - x[2]) * (py - y[2]) - (y[0] - y[2]) * (px - x[2])
        w2 = (x[1] - x[0]) * (py - y[0]) - (y[1] - y[0]) * (px - x[0])
        inside = (w0 >= 0.0) & (w1 >= 0.0) & (w2 >= 0.0)
        if not inside.any():
            return
        depth = (w0 * d[0] + w1 * d[1] + w2 * d[2]) / area
        sl = (slice(y0, y1 + 1), slice(x0, x1 + 1))
        win = inside & (depth > self.depth[sl])
        self.depth[sl][win] = depth[win]
        self.labels[sl][win] = label

    def capsule(self, ax: float, ay: float, ad: float, bx: float, by: float, bd: float,
                radius_px: float, label: int) -> None:
        box = self._bbox(np.array([ax, bx]), np.array([ay, by]), pad=radius_px)
        if box is None:
            return
        x0, x1, y0, y1 = box
        px = np.arange(x0, x1 + 1) + 0.5
        py = (np.arange(y0, y1 + 1) + 0.5)[:, None]
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        if seg2 == 0.0:
            t = np.zeros((y1 - y0 + 1, x1 - x0 + 1))
        else:
            t = np.clip(((px - ax) * dx + (py - ay) * dy) / seg2, 0.0, 1.0)
        cx = ax + t * dx
        cy = ay + t * dy
        inside = (px - cx) ** 2 + (py - cy) ** 2 <= radius_px * radius_px
        if not inside.any():
            return
        depth = ad + t * (bd - ad)
        sl = (slice(y0, y1 + 1), slice(x0, x1 + 1))
        win = inside & (depth > self.depth[sl])
        self.depth[sl][win] = depth[win]
        self.labels[sl][win] = label


def _render_labels(camera: ViewCamera,
                   meshes: list[tuple[np.ndarray, np.ndarray, int]],
                   strokes: list[tuple[np.ndarray, float, int]],
                   with_depth: bool = False):
    """Rasterize labeled meshes then labeled strokes; returns the label grid."""
    raster = _Raster()
    for vertices, triangles, label in meshes:
        x, y, d = _project(camera, vertices)
        for tri in triangles:
            raster.triangle(x[tri], y[tri], d[tri], label)
    for points, width, label in strokes:
        x, y, d = _project(camera, points)
        radius_px = (width / 2.0) * PX_PER_UNIT
        for i in range(len(points) - 1):
            raster.capsule(x[i], y[i], d[i], x[i + 1], y[i + 1], d[i + 1], radius_px, label)
    if with_depth:
        return raster.labels, raster.depth
    return raster.labels


def _scene_items(sketch: Sketch, model: ChairModel | None):
    meshes: list[tuple[np.ndarray, np.ndarray, int]] = []
    if model is not None:
        for part in sorted(model.shape.parts, key=int):
            mesh = model.shape.parts[part]
            label = int(model.assignment.color_of(part)) + 1
            meshes.append((mesh.vertices, mesh.triangles, label))
    strokes = [(s.points, s.width, int(s.color) + 1) for s in sketch.strokes]
    return meshes, strokes


def rasterize(camera: ViewCamera, sketch: Sketch, model: ChairModel | None = None) -> Snapshot:
    """One depth-buffered snapshot of the scene from the given camera."""
    meshes, strokes = _scene_items(sketch, model)
    return Snapshot(_render_labels(camera, meshes, strokes))


def snapshot_views(sketch: Sketch, model: ChairModel | None = None) -> list[Snapshot]:
    """The twelve fixed-angle snapshots, in view-index order."""
    return [rasterize(camera, sketch, model) for camera in VIEW_CAMERAS]


def encode_view(snapshot: Snapshot) -> np.ndarray:
    """Per-cell class-occupancy fractions, flattened cells-major (448 dims)."""
    cells = snapshot.classes.reshape(GRID, CELL, GRID, CELL)
    feature = np.empty((GRID, GRID, N_CLASSES), dtype=np.float64)
    for cls in range(N_CLASSES):
        counts = (cells == cls).sum(axis=(1, 3))
        feature[:, :, cls] = counts / float(CELL * CELL)
    return feature.reshape(DESCRIPTOR_DIM)


def pool_views(features: list[np.ndarray]) -> np.ndarray:
    """Element-wise maximum across the twelve per-view vectors."""
    if len(features) != N_VIEWS:
        raise InvalidInputError(f"expected {N_VIEWS} view vectors, got {len(features)}")
    stack = np.asarray(features, dtype=np.float64)
    if stack.shape != (N_VIEWS, DESCRIPTOR_DIM):
        raise InvalidInputError(f"view vectors must have dimension {DESCRIPTOR_DIM}")
    return stack.max(axis=0)


def sketch_descriptor(sketch: Sketch, model: ChairModel | None = None) -> np.ndarray:
    """Full pipeline: snapshots -> per-view encodings -> pooled descriptor."""
    return pool_views([encode_view(s) for s in snapshot_views(sketch, model)])


# --- per-shape occupancy used for fast instance descriptors -----------------

@dataclass
class ShapeOccupancy:
    """View-pooled per-cell occupancy of background and each part.

    Because an instance only recolors parts, its descriptor is this tensor
    with part rows scattered into the color channels of its assignment; the
    result is bit-identical to running the full snapshot pipeline.
    """

    shape_id: int
    parts: tuple[PartKind, ...]
    pooled: np.ndarray  # (64, 1 + len(parts)) float64; column 0 = background
    view_labels: np.ndarray | None = field(repr=False, default=None)  # (12, 128, 128) uint8
    view_depths: np.ndarray | None = field(repr=False, default=None)  # (12, 128, 128) float64


def shape_occupancy(shape: ChairShape, keep_views: bool = False) -> ShapeOccupancy:
    parts = shape.present_parts
    per_view = np.empty((N_VIEWS, GRID * GRID, 1 + len(parts)), dtype=np.float64)
    view_labels = np.empty((N_VIEWS, RESOLUTION, RESOLUTION), dtype=np.uint8) if keep_views else None
    view_depths = np.empty((N_VIEWS, RESOLUTION, RESOLUTION), dtype=np.float64) if keep_views else None
    meshes = [(shape.parts[p].vertices, shape.parts[p].triangles, k + 1)
              for k, p in enumerate(parts)]
    for camera in VIEW_CAMERAS:
        if keep_views:
            labels, depth = _render_labels(camera, meshes, [], with_depth=True)
            view_labels[camera.view_index] = labels
            view_depths[camera.view_index] = depth
        else:
            labels = _render_labels(camera, meshes, [])
        cells = labels.reshape(GRID, CELL, GRID, CELL)
        for k in range(1 + len(parts)):
            counts = (cells == k).sum(axis=(1, 3))
            per_view[camera.view_index, :, k] = (counts / float(CELL * CELL)).reshape(-1)
    return ShapeOccupancy(shape.shape_id, parts, per_view.max(axis=0), view_labels, view_depths)


def instance_descriptor(occupancy: ShapeOccupancy, assignment: ColorAssignment) -> np.ndarray:
    """Descriptor of (empty sketch + chair) from precomputed occupancy."""
    out = np.zeros((GRID * GRID, N_CLASSES), dtype=np.float64)
    out[:, 0] = occupancy.pooled[:, 0]
    for k, part in enumerate(occupancy.parts):
        out[:, int(assignment.color_of(part)) + 1] = occupancy.pooled[:, k + 1]
    return out.reshape(DESCRIPTOR_DIM)


# --- image export ------------------------------------------------------------

BACKGROUND_RGB = (248, 248, 248)


def snapshot_rgb(snapshot: Snapshot) -> np.ndarray:
    """Class grid -> uint8 RGB image."""
    lut = np.empty((N_CLASSES, 3), dtype=np.uint8)
    lut[0] = BACKGROUND_RGB
    for color in ColorId:
        lut[int(color) + 1] = [int(round(c * 255)) for c in COLOR_RGB[color]]
    return lut[snapshot.classes]


def snapshot_png(snapshot: Snapshot) -> bytes:
    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(snapshot_rgb(snapshot), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
