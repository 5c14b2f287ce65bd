// Client-side hit testing against the server-computed polar layout.
// Conventions mirror the engine exactly: angles are mathematical radians
// (counter-clockwise, y up), angular intervals are half-open [start, end)
// relative to theta0, radial intervals half-open [inner, outer), and the
// disk rim (radius >= 1) is outside every segment.

import type { LayoutResponse } from "./types.js";

const TWO_PI = 2 * Math.PI;

export interface PolarPoint {
  radius: number;
  angle: number;
}

export interface SegmentHit {
  axisIndex: number;
  level: number;
}

/** Euclidean mod that always lands in [0, m). */
export function mod(value: number, m: number): number {
  return ((value % m) + m) % m;
}

/**
 * Convert view coordinates (y growing downwards) to polar coordinates on
 * the unit disk centred at (cx, cy) with the given pixel radius.
 */
export function viewToPolar(
  x: number,
  y: number,
  cx: number,
  cy: number,
  scale: number,
): PolarPoint {
  const dx = x - cx;
  const dy = cy - y; // flip into math orientation
  return {
    radius: Math.hypot(dx, dy) / scale,
    angle: Math.atan2(dy, dx),
  };
}

/** Polar back to view coordinates (inverse of viewToPolar). */
export function polarToView(
  radius: number,
  angle: number,
  cx: number,
  cy: number,
  scale: number,
): { x: number; y: number } {
  return {
    x: cx + scale * radius * Math.cos(angle),
    y: cy - scale * radius * Math.sin(angle),
  };
}

export function hitTest(
  layout: LayoutResponse,
  point: PolarPoint,
): SegmentHit | null {
  if (point.radius < 0 || point.radius >= 1) return null;
  const turn = mod(point.angle - layout.theta0, TWO_PI);
  const axisIndex = Math.min(
    Math.floor(turn / layout.sector_width),
    layout.d - 1,
  );
  const n = layout.rings[axisIndex].length;
  const level = Math.min(Math.floor(point.radius * n), n - 1);
  return { axisIndex, level };
}

/** Marker position of a level: ring centre radius at the sector centre angle. */
export function locate(
  layout: LayoutResponse,
  axisIndex: number,
  level: number,
): PolarPoint {
  return {
    radius: layout.rings[axisIndex][level].center,
    angle: layout.sectors[axisIndex].center,
  };
}
