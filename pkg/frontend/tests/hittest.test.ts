import { describe, expect, it } from "vitest";

import { hitTest, locate, mod, polarToView, viewToPolar } from "../src/hittest.js";
import type { LayoutResponse } from "../src/types.js";
import snapshots from "./fixtures/cooling_api.json";

const layout = snapshots["/api/layout"] as unknown as LayoutResponse;
const TWO_PI = 2 * Math.PI;

describe("mod", () => {
  it("maps negatives into [0, m)", () => {
    expect(mod(-0.25, TWO_PI)).toBeCloseTo(TWO_PI - 0.25, 12);
    expect(mod(0.25, TWO_PI)).toBeCloseTo(0.25, 12);
    expect(mod(TWO_PI, TWO_PI)).toBeCloseTo(0, 12);
  });
});

describe("view/polar conversion", () => {
  it("round-trips points", () => {
    const { x, y } = polarToView(0.6, 1.1, 320, 320, 250);
    const polar = viewToPolar(x, y, 320, 320, 250);
    expect(polar.radius).toBeCloseTo(0.6, 10);
    expect(polar.angle).toBeCloseTo(1.1, 10);
  });

  it("flips the y axis so angles are mathematical", () => {
    // angle pi/2 (up) must have a smaller y than the centre
    const { x, y } = polarToView(0.5, Math.PI / 2, 320, 320, 250);
    expect(x).toBeCloseTo(320, 6);
    expect(y).toBeLessThan(320);
  });
});

describe("hitTest against the engine layout", () => {
  it("round-trips locate for every axis and level", () => {
    layout.rings.forEach((rings, axisIndex) => {
      for (let level = 0; level < rings.length; level++) {
        const hit = hitTest(layout, locate(layout, axisIndex, level));
        expect(hit).toEqual({ axisIndex, level });
      }
    });
  });

  it("excludes the rim and beyond", () => {
    expect(hitTest(layout, { radius: 1.0, angle: 0.2 })).toBeNull();
    expect(hitTest(layout, { radius: 1.7, angle: 0.2 })).toBeNull();
  });

  it("assigns a sector boundary to the sector that starts there", () => {
    const sector = layout.sectors[2];
    const hit = hitTest(layout, { radius: 0.5, angle: sector.start });
    expect(hit?.axisIndex).toBe(2);
  });

  it("assigns a ring boundary to the outer ring", () => {
    // maintenance has 3 levels; radius exactly 1/3 belongs to level 1
    const angle = layout.sectors[3].center;
    const hit = hitTest(layout, { radius: 1 / 3, angle });
    expect(hit).toEqual({ axisIndex: 3, level: 1 });
  });

  it("is periodic in the angle", () => {
    const point = { radius: 0.4, angle: 0.9 };
    const shifted = { radius: 0.4, angle: 0.9 + TWO_PI };
    expect(hitTest(layout, point)).toEqual(hitTest(layout, shifted));
  });
});
