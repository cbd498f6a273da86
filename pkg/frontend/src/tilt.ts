/**
 * Eyelight tilt math, mirroring the analysis library so the UI can show
 * an instant local value while the authoritative server preview is in
 * flight. 0° means the highlight sits straight above the pupil (light
 * from directly above); negative angles lean to the viewer's left;
 * image y grows downward.
 */

import type { EyelightPair, Point } from "./document.js";

/** Wrap an angle in degrees to the half-open interval (-180, 180]. */
export function wrapAngleDeg(angle: number): number {
  const wrapped = angle - 360 * Math.floor((angle + 180) / 360);
  return wrapped === -180 ? 180 : wrapped;
}

/** Direction of the pupil→highlight vector, in degrees. */
export function tiltAngleDeg(pupil: Point, highlight: Point): number {
  const wx = highlight.x - pupil.x;
  const wy = highlight.y - pupil.y;
  if (wx === 0 && wy === 0) {
    throw new RangeError("highlight coincides with pupil");
  }
  return (Math.atan2(wx, -wy) * 180) / Math.PI;
}

/** Anatomical left-minus-right tilt difference (viewer-frame right − left). */
export function interocularDeltaDeg(pair: EyelightPair): number {
  return wrapAngleDeg(
    tiltAngleDeg(pair.right_pupil, pair.right_highlight) -
      tiltAngleDeg(pair.left_pupil, pair.left_highlight),
  );
}

export function formatTilt(deg: number): string {
  return `${deg >= 0 ? "+" : "−"}${Math.abs(deg).toFixed(1)}°`;
}
