/** Shared fixtures for the UI logic tests. */

import type { AnnotationDocument } from "../src/document.js";

/** A small, fully valid document exercising every optional field. */
export function makeDoc(): AnnotationDocument {
  return {
    version: 1,
    meta: {
      id: "p-001",
      title: "Test Panel",
      year: 1650,
      width_px: 400,
      height_px: 300,
      image_path: "images/p-001.png",
    },
    horizon: { y_h: 120 },
    figures: [
      {
        head: { x: 100, y: 80 },
        foot: { x: 102, y: 200 },
        shadow_end: { x: 150, y: 210 },
      },
      { head: { x: 220, y: 90 }, foot: { x: 222, y: 180 }, shadow_end: null },
    ],
    faces: [
      {
        bbox: [90, 60, 30, 36],
        category: "FF",
        eyelights: {
          left_pupil: { x: 98, y: 70 },
          left_highlight: { x: 99, y: 68 },
          right_pupil: { x: 110, y: 70 },
          right_highlight: { x: 111, y: 68 },
        },
      },
      { bbox: [210, 70, 24, 30], category: "OTHER", eyelights: null },
    ],
  };
}

/** Deterministic PRNG (mulberry32) for seeded fuzz tests. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
