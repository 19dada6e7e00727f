// 3D sketching on a rotatable draw plane.
//
// The browser has no tracked controller, so strokes are drawn in 2D on a
// plane through the working volume; re-orienting the plane between
// strokes builds genuinely 3D sketches. Serialization is plain JSON of
// finite doubles, which round-trips losslessly.

import type { StrokeWire, Vec3 } from "./types.js";

export const WORKING_VOLUME = 1.5;
export const DEFAULT_WIDTH = 0.05;

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

export interface PlanePose {
  azimuthDeg: number;
  elevationDeg: number;
  offset: number; // signed distance of the plane from the volume center
}

/** Orthonormal (right, up, normal) basis for a plane pose. */
export function planeBasis(pose: PlanePose): { right: Vec3; up: Vec3; normal: Vec3 } {
  const az = (pose.azimuthDeg * Math.PI) / 180;
  const el = (pose.elevationDeg * Math.PI) / 180;
  const normal: Vec3 = [
    Math.sin(az) * Math.cos(el),
    Math.sin(el),
    Math.cos(az) * Math.cos(el),
  ];
  const right: Vec3 = [Math.cos(az), 0, -Math.sin(az)];
  const up: Vec3 = [
    normal[1] * right[2] - normal[2] * right[1],
    normal[2] * right[0] - normal[0] * right[2],
    normal[0] * right[1] - normal[1] * right[0],
  ];
  return { right, up, normal };
}

/** Map 2D plane coordinates (u right, v up) to a 3D point on the plane. */
export function planePoint(pose: PlanePose, u: number, v: number): Vec3 {
  const { right, up, normal } = planeBasis(pose);
  const point: Vec3 = [
    u * right[0] + v * up[0] + pose.offset * normal[0],
    u * right[1] + v * up[1] + pose.offset * normal[1],
    u * right[2] + v * up[2] + pose.offset * normal[2],
  ];
  return point.map((c) => clamp(c, -WORKING_VOLUME, WORKING_VOLUME)) as Vec3;
}

export interface LocalStroke {
  points: Vec3[];
  color: number;
  width: number;
}

export class CanvasState {
  strokes: LocalStroke[] = [];
  activeColor = 0;
  activeWidth = DEFAULT_WIDTH;
  plane: PlanePose = { azimuthDeg: 0, elevationDeg: 0, offset: 0 };
  private pending: Vec3[] | null = null;

  beginStroke(u: number, v: number): void {
    this.pending = [planePoint(this.plane, u, v)];
  }

  extendStroke(u: number, v: number): void {
    if (this.pending) this.pending.push(planePoint(this.plane, u, v));
  }

  endStroke(): void {
    if (this.pending && this.pending.length >= 2) {
      this.strokes.push({
        points: this.pending,
        color: this.activeColor,
        width: this.activeWidth,
      });
    }
    this.pending = null;
  }

  undo(): void {
    this.strokes.pop();
  }

  clear(): void {
    this.strokes = [];
    this.pending = null;
  }
}

export function serializeStrokes(strokes: LocalStroke[]): StrokeWire[] {
  return strokes.map((s) => ({
    points: s.points.map((p) => [p[0], p[1], p[2]] as Vec3),
    color: s.color,
    width: s.width,
  }));
}

export function deserializeStrokes(wire: StrokeWire[]): LocalStroke[] {
  return wire.map((s) => ({
    points: s.points.map((p) => [p[0], p[1], p[2]] as Vec3),
    color: s.color,
    width: s.width,
  }));
}

export function strokesEqual(a: LocalStroke[], b: LocalStroke[]): boolean {
  if (a.length !== b.length) return false;
  return a.every((sa, i) => {
    const sb = b[i];
    return (
      sa.color === sb.color &&
      sa.width === sb.width &&
      sa.points.length === sb.points.length &&
      sa.points.every((p, j) => p.every((c, k) => c === sb.points[j][k]))
    );
  });
}
