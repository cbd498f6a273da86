/**
 * Zoom/pan viewport math. Screen = world · scale + offset; all functions
 * are pure so the transform is trivially testable and rendering stays a
 * pure display of (document, viewport).
 */

import type { Point } from "./document.js";

export interface Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export const MIN_SCALE = 0.05;
export const MAX_SCALE = 64;

export function worldToScreen(v: Viewport, p: Point): Point {
  return { x: p.x * v.scale + v.offsetX, y: p.y * v.scale + v.offsetY };
}

export function screenToWorld(v: Viewport, p: Point): Point {
  return { x: (p.x - v.offsetX) / v.scale, y: (p.y - v.offsetY) / v.scale };
}

function clampScale(scale: number): number {
  return Math.min(MAX_SCALE, Math.max(MIN_SCALE, scale));
}

/**
 * Zoom by `factor` keeping the world point under `anchor` (screen
 * coordinates) fixed on screen.
 */
export function zoomAt(v: Viewport, anchor: Point, factor: number): Viewport {
  const scale = clampScale(v.scale * factor);
  const world = screenToWorld(v, anchor);
  return {
    scale,
    offsetX: anchor.x - world.x * scale,
    offsetY: anchor.y - world.y * scale,
  };
}

export function panBy(v: Viewport, dx: number, dy: number): Viewport {
  return { scale: v.scale, offsetX: v.offsetX + dx, offsetY: v.offsetY + dy };
}

/** Center the image in the canvas at the largest scale that fits it. */
export function fitToCanvas(
  imageW: number,
  imageH: number,
  canvasW: number,
  canvasH: number,
  margin = 0,
): Viewport {
  const usableW = Math.max(1, canvasW - 2 * margin);
  const usableH = Math.max(1, canvasH - 2 * margin);
  const scale = clampScale(Math.min(usableW / imageW, usableH / imageH));
  return {
    scale,
    offsetX: (canvasW - imageW * scale) / 2,
    offsetY: (canvasH - imageH * scale) / 2,
  };
}
