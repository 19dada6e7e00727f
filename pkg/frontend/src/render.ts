// Orthographic preview of the 3D sketch on a 2D canvas. The camera orbits
// the working volume like the server's snapshot cameras, so what you see
// is close to what the retrieval pipeline will rasterize.

import { LocalStroke } from "./strokes.js";
import { PALETTE, Vec3 } from "./types.js";

export interface OrbitCamera {
  azimuthDeg: number;
  elevationDeg: number;
  halfExtent: number;
}

export function cameraBasis(camera: OrbitCamera): { right: Vec3; up: Vec3 } {
  const az = (camera.azimuthDeg * Math.PI) / 180;
  const el = (camera.elevationDeg * Math.PI) / 180;
  const eye: Vec3 = [Math.sin(az) * Math.cos(el), Math.sin(el), Math.cos(az) * Math.cos(el)];
  const right: Vec3 = [Math.cos(az), 0, -Math.sin(az)];
  const up: Vec3 = [
    right[1] * -eye[2] - right[2] * -eye[1],
    right[2] * -eye[0] - right[0] * -eye[2],
    right[0] * -eye[1] - right[1] * -eye[0],
  ];
  // up = right x forward where forward = -eye
  return { right, up };
}

export function project(camera: OrbitCamera, point: Vec3, size: number): [number, number] {
  const { right, up } = cameraBasis(camera);
  const u = point[0] * right[0] + point[1] * right[1] + point[2] * right[2];
  const v = point[0] * up[0] + point[1] * up[1] + point[2] * up[2];
  const x = ((u + camera.halfExtent) / (2 * camera.halfExtent)) * size;
  const y = ((camera.halfExtent - v) / (2 * camera.halfExtent)) * size;
  return [x, y];
}

export function drawStrokes(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  strokes: LocalStroke[],
  size: number,
): void {
  ctx.clearRect(0, 0, size, size);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, size, size);
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  for (const stroke of strokes) {
    ctx.strokeStyle = PALETTE[stroke.color]?.css ?? "#000";
    ctx.lineWidth = Math.max(1, (stroke.width / (2 * camera.halfExtent)) * size);
    ctx.beginPath();
    stroke.points.forEach((p, i) => {
      const [x, y] = project(camera, p, size);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
}
