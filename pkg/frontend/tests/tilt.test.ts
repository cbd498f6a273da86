import { describe, expect, it } from "vitest";

import type { EyelightPair } from "../src/document.js";
import {
  formatTilt,
  interocularDeltaDeg,
  tiltAngleDeg,
  wrapAngleDeg,
} from "../src/tilt.js";
import { mulberry32 } from "./helpers.js";

describe("tiltAngleDeg", () => {
  it("matches the analysis convention on pinned cases", () => {
    // highlight up-left of the pupil → −45°
    expect(tiltAngleDeg({ x: 10, y: 10 }, { x: 5, y: 5 })).toBeCloseTo(-45, 12);
    // straight above (image y grows downward) → 0°
    expect(tiltAngleDeg({ x: 50, y: 50 }, { x: 50, y: 40 })).toBe(0);
    // straight below → 180°
    expect(tiltAngleDeg({ x: 0, y: 0 }, { x: 0, y: 7 })).toBeCloseTo(180, 12);
    // due right → +90°
    expect(tiltAngleDeg({ x: 0, y: 0 }, { x: 5, y: 0 })).toBeCloseTo(90, 12);
    // due left → −90°
    expect(tiltAngleDeg({ x: 0, y: 0 }, { x: -5, y: 0 })).toBeCloseTo(-90, 12);
  });

  it("is invariant to the offset magnitude (direction only)", () => {
    const a = tiltAngleDeg({ x: 3, y: 4 }, { x: 4, y: 2 });
    const b = tiltAngleDeg({ x: 3, y: 4 }, { x: 13, y: -16 });
    expect(a).toBeCloseTo(b, 12);
  });

  it("rejects a highlight on top of the pupil", () => {
    expect(() => tiltAngleDeg({ x: 2, y: 3 }, { x: 2, y: 3 })).toThrow(RangeError);
  });

  it("negates under mirroring about a vertical axis", () => {
    const rand = mulberry32(20260819);
    for (let i = 0; i < 500; i += 1) {
      const pupil = { x: rand() * 200 - 100, y: rand() * 200 - 100 };
      const highlight = { x: rand() * 200 - 100, y: rand() * 200 - 100 };
      if (highlight.x === pupil.x && highlight.y === pupil.y) continue;
      const tilt = tiltAngleDeg(pupil, highlight);
      const mirrored = tiltAngleDeg(
        { x: -pupil.x, y: pupil.y },
        { x: -highlight.x, y: highlight.y },
      );
      expect(Math.abs(wrapAngleDeg(tilt + mirrored))).toBeLessThanOrEqual(1e-9);
    }
  });
});

describe("wrapAngleDeg", () => {
  it("wraps into (-180, 180] with 180 kept positive", () => {
    expect(wrapAngleDeg(0)).toBe(0);
    expect(wrapAngleDeg(180)).toBe(180);
    expect(wrapAngleDeg(-180)).toBe(180);
    expect(wrapAngleDeg(540)).toBe(180);
    expect(wrapAngleDeg(-540)).toBe(180);
    expect(wrapAngleDeg(181)).toBe(-179);
    expect(wrapAngleDeg(-181)).toBe(179);
    expect(wrapAngleDeg(359)).toBe(-1);
    expect(wrapAngleDeg(720.5)).toBeCloseTo(0.5, 12);
  });
});

describe("interocularDeltaDeg", () => {
  it("is right tilt minus left tilt", () => {
    const s3 = Math.sqrt(3);
    const pair: EyelightPair = {
      left_pupil: { x: 0, y: 0 },
      left_highlight: { x: -1, y: -s3 }, // −30°
      right_pupil: { x: 10, y: 0 },
      right_highlight: { x: 11, y: -s3 }, // +30°
    };
    expect(interocularDeltaDeg(pair)).toBeCloseTo(60, 12);
  });

  it("wraps across the ±180° seam", () => {
    const pair: EyelightPair = {
      left_pupil: { x: 0, y: 0 },
      left_highlight: { x: Math.sin((170 * Math.PI) / 180), y: -Math.cos((170 * Math.PI) / 180) },
      right_pupil: { x: 10, y: 0 },
      right_highlight: {
        x: 10 + Math.sin((-170 * Math.PI) / 180),
        y: -Math.cos((-170 * Math.PI) / 180),
      },
    };
    // −170 − 170 = −340 → wraps to +20
    expect(interocularDeltaDeg(pair)).toBeCloseTo(20, 9);
  });
});

describe("formatTilt", () => {
  it("renders sign, one decimal, and a degree mark", () => {
    expect(formatTilt(-12.34)).toBe("−12.3°");
    expect(formatTilt(5)).toBe("+5.0°");
    expect(formatTilt(0)).toBe("+0.0°");
  });
});
