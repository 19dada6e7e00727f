"""Canonical silhouette polylines per shape, for simulated sketching.

For each part we render the shape from the front and side cameras, pull
the part's outline out of the label image with marching squares, add
serpentine fill stripes (users shade regions with connected zigzag
strokes), and lift every traced point back into 3D at its rendered surface
depth.  The polylines therefore hug the chair's visible surface, so a
sketch built from them reads like the chair from every snapshot angle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from skimage import measure

from .errors import InvalidInputError
from .geometry import ChairShape
from .palette import PartKind
from .sketch import (
    RESOLUTION,
    VIEW_CAMERAS,
    WORKING_VOLUME,
    shape_occupancy,
)

# Front and right-side cameras; together they expose every part.
TRACE_VIEWS = (0, 3)
MIN_CONTOUR_PX = 12
MAX_CONTOURS_PER_PART = 3
POINT_STRIDE = 5
HATCH_ROW_STRIDE = 6
MIN_HATCH_RUN_PX = 3
# Tracing one pixel inside the outline and drawing at this width keeps the
# rendered stroke shell's pooled color mass close to the solid chair's, which
# is what makes the traced sketch retrieve its own shape reliably.
TRACE_EROSION_PX = 1
ORACLE_STROKE_WIDTH = 0.055


@dataclass(frozen=True)
class SilhouettePolyline:
    part: PartKind
    points: np.ndarray  # (P, 3) float64 inside the working volume


def _surface_depth(mask: np.ndarray, depth: np.ndarray, r: float, c: float) -> float | None:
    """Depth at the in-mask pixel nearest to a sub-pixel contour point."""
    r0, c0 = int(np.floor(r)), int(np.floor(c))
    for dr, dc in ((0, 0), (0, 1), (1, 0), (1, 1), (-1, 0), (0, -1), (-1, -1), (2, 0), (0, 2)):
        rr, cc = r0 + dr, c0 + dc
        if 0 <= rr < RESOLUTION and 0 <= cc < RESOLUTION and mask[rr, cc]:
            return float(depth[rr, cc])
    return None


def _lift(points_px: np.ndarray, camera, mask: np.ndarray, depth: np.ndarray) -> np.ndarray | None:
    """Sub-pixel (row, col) points -> 3D points on the rendered surface."""
    right, up, eye = camera.basis()
    he = camera.half_extent
    out = []
    for r, c in points_px:
        d = _surface_depth(mask, depth, r, c)
        if d is None:
            continue
        u = (c + 0.5) / RESOLUTION * 2.0 * he - he
        v = he - (r + 0.5) / RESOLUTION * 2.0 * he
        out.append(u * right + v * up + d * eye)
    if len(out) < 2:
        return None
    return np.clip(np.array(out), -WORKING_VOLUME, WORKING_VOLUME)


def _row_runs(mask: np.ndarray) -> list[list[tuple[int, int, int]]]:
    """Hatch rows as (row, col_start, col_end) runs, grouped per row."""
    out = []
    for r in range(0, RESOLUTION, HATCH_ROW_STRIDE):
        cols = np.flatnonzero(mask[r])
        if len(cols) == 0:
            continue
        breaks = np.flatnonzero(np.diff(cols) > 1)
        starts = np.concatenate([[0], breaks + 1])
        ends = np.concatenate([breaks, [len(cols) - 1]])
        runs = [
            (r, int(cols[s]), int(cols[e]))
            for s, e in zip(starts, ends)
            if cols[e] - cols[s] >= MIN_HATCH_RUN_PX
        ]
        if runs:
            out.append(runs)
    return out


def _serpentine_fills(mask: np.ndarray) -> list[np.ndarray]:
    """Zigzag fill polylines: stripe runs chained row to row while their
    column ranges overlap, as a user shading without lifting the pen."""
    chains: list[list[tuple[int, int, int]]] = []
    open_chains: list[list[tuple[int, int, int]]] = []
    for runs in _row_runs(mask):
        next_open: list[list[tuple[int, int, int]]] = []
        unclaimed = list(runs)
        for chain in open_chains:
            _, c0, c1 = chain[-1]
            match = next((run for run in unclaimed if run[1] <= c1 and run[2] >= c0), None)
            if match is not None:
                unclaimed.remove(match)
                chain.append(match)
                next_open.append(chain)
            else:
                chains.append(chain)
        for run in unclaimed:
            next_open.append([run])
        open_chains = next_open
    chains.extend(open_chains)
    polylines = []
    for chain in chains:
        pts = []
        for i, (r, c0, c1) in enumerate(chain):
            ends = (c0, c1) if i % 2 == 0 else (c1, c0)
            pts.append([r, ends[0]])
            pts.append([r, ends[1]])
        if len(pts) >= 2:
            polylines.append(np.array(pts, dtype=np.float64))
    return polylines


def trace_silhouette(shape: ChairShape) -> list[SilhouettePolyline]:
    """Per-part outlines plus fill stripes, lifted onto the chair surface."""
    occupancy = shape_occupancy(shape, keep_views=True)
    polylines: list[SilhouettePolyline] = []
    for view_index in TRACE_VIEWS:
        camera = VIEW_CAMERAS[view_index]
        labels = occupancy.view_labels[view_index]
        depth = occupancy.view_depths[view_index]
        for k, part in enumerate(occupancy.parts):
            mask = labels == k + 1
            if not mask.any():
                continue
            eroded = ndimage.binary_erosion(mask, iterations=TRACE_EROSION_PX)
            trace_mask = eroded if eroded.any() else mask
            contours = measure.find_contours(trace_mask.astype(np.float64), 0.5)
            contours = sorted(contours, key=len, reverse=True)[:MAX_CONTOURS_PER_PART]
            traces: list[np.ndarray] = []
            for contour in contours:
                if len(contour) < MIN_CONTOUR_PX:
                    continue
                sampled = contour[::POINT_STRIDE]
                if len(sampled) >= 2:
                    traces.append(np.vstack([sampled, sampled[:1]]))
            traces.extend(_serpentine_fills(trace_mask))
            for trace in traces:
                lifted = _lift(trace, camera, mask, depth)
                if lifted is not None:
                    polylines.append(SilhouettePolyline(part, lifted))
    if not polylines:
        raise InvalidInputError(f"shape {shape.shape_id} produced no silhouette polylines")
    return polylines
