import { describe, expect, it } from "vitest";

import {
  CanvasState,
  deserializeStrokes,
  planeBasis,
  planePoint,
  serializeStrokes,
  strokesEqual,
  WORKING_VOLUME,
} from "../src/strokes.js";
import { ApiClient } from "../src/api.js";
import { MockService } from "./mock.js";

describe("draw plane", () => {
  it("front plane maps u/v to x/y at the given depth", () => {
    const pose = { azimuthDeg: 0, elevationDeg: 0, offset: 0.5 };
    const p = planePoint(pose, 0.3, -0.2);
    expect(p[0]).toBeCloseTo(0.3, 12);
    expect(p[1]).toBeCloseTo(-0.2, 12);
    expect(p[2]).toBeCloseTo(0.5, 12);
  });

  it("basis vectors are orthonormal for any pose", () => {
    const pose = { azimuthDeg: 37, elevationDeg: 22, offset: -0.4 };
    const { right, up, normal } = planeBasis(pose);
    const dot = (a: number[], b: number[]) => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    expect(dot(right, up)).toBeCloseTo(0, 12);
    expect(dot(right, normal)).toBeCloseTo(0, 12);
    expect(dot(up, normal)).toBeCloseTo(0, 12);
    expect(dot(up, up)).toBeCloseTo(1, 12);
  });

  it("points clamp to the working volume", () => {
    const pose = { azimuthDeg: 0, elevationDeg: 0, offset: 1.4 };
    const p = planePoint(pose, 2.0, 0);
    expect(Math.max(...p.map(Math.abs))).toBeLessThanOrEqual(WORKING_VOLUME);
  });

  it("rotating the plane between strokes yields 3D sketches", () => {
    const canvas = new CanvasState();
    canvas.beginStroke(-0.5, 0);
    canvas.extendStroke(0.5, 0);
    canvas.endStroke();
    canvas.plane.azimuthDeg = 90;
    canvas.beginStroke(-0.5, 0);
    canvas.extendStroke(0.5, 0);
    canvas.endStroke();
    const [first, second] = canvas.strokes;
    // first stroke varies in x, second in z
    expect(Math.abs(first.points[1][0] - first.points[0][0])).toBeCloseTo(1.0, 10);
    expect(Math.abs(second.points[1][2] - second.points[0][2])).toBeCloseTo(1.0, 10);
  });
});

describe("stroke serialization", () => {
  it("round-trips geometry exactly", () => {
    const canvas = new CanvasState();
    canvas.activeColor = 3;
    canvas.activeWidth = 0.07;
    canvas.plane = { azimuthDeg: 33.3, elevationDeg: -12.5, offset: 0.737 };
    canvas.beginStroke(-1.234567890123, 0.5);
    canvas.extendStroke(0.1e-9, -0.25);
    canvas.extendStroke(1.05, 1.45);
    canvas.endStroke();

    const wire = serializeStrokes(canvas.strokes);
    const back = deserializeStrokes(JSON.parse(JSON.stringify(wire)));
    expect(strokesEqual(canvas.strokes, back)).toBe(true);
  });

  it("round-trips through the submit body verbatim", async () => {
    const service = new MockService();
    const api = new ApiClient("", service.fetch);
    await api.createSession({ mode: "sketch" });
    const canvas = new CanvasState();
    canvas.beginStroke(0.1, 0.2);
    canvas.extendStroke(0.3, 0.4);
    canvas.endStroke();
    const wire = serializeStrokes(canvas.strokes);
    await api.submitSketch("s1", wire, false);
    expect(service.lastStrokes).not.toBeNull();
    expect(strokesEqual(deserializeStrokes(service.lastStrokes!), canvas.strokes)).toBe(true);
  });

  it("drops single-point strokes", () => {
    const canvas = new CanvasState();
    canvas.beginStroke(0, 0);
    canvas.endStroke();
    expect(canvas.strokes).toHaveLength(0);
  });
});
