/**
 * The six pose/gaze categories with example thumbnails.
 *
 * Categorization happens by matching against pictures, not by reading
 * label text, so each entry carries a small inline-SVG example head
 * (data URI — the app ships no binary assets): head orientation shown
 * by the profile outline and nose, gaze by pupil placement.
 */

import type { PoseGaze } from "./document.js";

export interface CategoryEntry {
  code: PoseGaze;
  /** Keyboard shortcut, "1"… "6". */
  key: string;
  label: string;
  /** data: URI for an <img> example thumbnail. */
  thumbnail: string;
}

interface HeadSpec {
  /** -1 head turned to viewer-left, 0 frontal, +1 viewer-right. */
  facing: -1 | 0 | 1;
  /** -1 gazing to viewer-left, 0 at the viewer, +1 to viewer-right. */
  gazing: -1 | 0 | 1;
}

function headSvg({ facing, gazing }: HeadSpec): string {
  // A 64x64 bust: ellipse head, nose wedge on the facing side, pupils
  // shifted toward the gaze direction. Lateral gazes hide the far eye.
  const cx = 32 + 6 * facing;
  const noseX = cx + 13 * (facing === 0 ? 0 : facing);
  const nose =
    facing === 0
      ? `<path d="M ${cx - 2} 30 L ${cx} 36 L ${cx + 2} 30" fill="none" stroke="#4a3b2f" stroke-width="1.6"/>`
      : `<path d="M ${noseX} 26 L ${noseX + 5 * facing} 31 L ${noseX} 34" fill="#e8c39e" stroke="#4a3b2f" stroke-width="1.2"/>`;
  const pupilShift = 2.6 * gazing;
  const eyes: string[] = [];
  const eyeOffsets = facing === 0 ? [-7, 7] : facing === -1 ? [-8, 2] : [-2, 8];
  for (const off of eyeOffsets) {
    const ex = cx + off;
    eyes.push(
      `<ellipse cx="${ex}" cy="26" rx="4" ry="2.6" fill="#fff" stroke="#4a3b2f" stroke-width="1"/>`,
      `<circle cx="${ex + pupilShift}" cy="26" r="1.6" fill="#2b241e"/>`,
    );
  }
  return svgUri(`
    <rect width="64" height="64" fill="#d9cfc0"/>
    <ellipse cx="${cx}" cy="46" rx="17" ry="12" fill="#6b5a73"/>
    <ellipse cx="${cx}" cy="28" rx="14" ry="16" fill="#e8c39e" stroke="#4a3b2f" stroke-width="1.4"/>
    <path d="M ${cx - 14} 24 Q ${cx} 6 ${cx + 14} 24 L ${cx + 14} 20 Q ${cx} 4 ${cx - 14} 20 Z" fill="#5a4632"/>
    ${nose}
    ${eyes.join("")}
    <path d="M ${cx - 4} 36 Q ${cx} 38.5 ${cx + 4} 36" fill="none" stroke="#4a3b2f" stroke-width="1.4"/>
  `);
}

function otherSvg(): string {
  return svgUri(`
    <rect width="64" height="64" fill="#d9cfc0"/>
    <ellipse cx="32" cy="30" rx="15" ry="17" fill="#e8c39e" stroke="#4a3b2f" stroke-width="1.4" opacity="0.45"/>
    <text x="32" y="40" text-anchor="middle" font-family="Georgia, serif" font-size="30" fill="#4a3b2f">?</text>
  `);
}

function svgUri(body: string): string {
  const svg = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 64 64">${body}</svg>`;
  return `data:image/svg+xml;utf8,${encodeURIComponent(svg)}`;
}

export const CATEGORY_STRIP: readonly CategoryEntry[] = [
  {
    code: "LL",
    key: "1",
    label: "left profile, gazing left",
    thumbnail: headSvg({ facing: -1, gazing: -1 }),
  },
  {
    code: "LF",
    key: "2",
    label: "left profile, gazing at the viewer",
    thumbnail: headSvg({ facing: -1, gazing: 0 }),
  },
  {
    code: "FF",
    key: "3",
    label: "frontal, gazing at the viewer",
    thumbnail: headSvg({ facing: 0, gazing: 0 }),
  },
  {
    code: "RF",
    key: "4",
    label: "right profile, gazing at the viewer",
    thumbnail: headSvg({ facing: 1, gazing: 0 }),
  },
  {
    code: "RR",
    key: "5",
    label: "right profile, gazing right",
    thumbnail: headSvg({ facing: 1, gazing: 1 }),
  },
  { code: "OTHER", key: "6", label: "other", thumbnail: otherSvg() },
];
