/**
 * Annotation tools as pure state machines: (state, event, context) →
 * (state, optional edit, optional selection change, optional cue).
 *
 * Keeping the click logic out of the DOM layer means every interaction
 * rule — clicks outside the image rejected, foot strictly below head,
 * both eyes placed before an eyelight pair exists, minimum zoom on the
 * eye region — is unit-testable without a browser.
 */

import type {
  AnnotationDocument,
  EyelightPair,
  Face,
  Point,
  PoseGaze,
} from "./document.js";
import { POSE_GAZE_CODES } from "./document.js";
import type { Edit } from "./edits.js";

export type ToolKind = "horizon" | "figure" | "shadow" | "face" | "eyelight" | "category";

export const TOOL_KINDS: readonly ToolKind[] = [
  "horizon",
  "figure",
  "shadow",
  "face",
  "eyelight",
  "category",
];

/** Zoom below which eyelight clicks are refused (clicks would be too coarse). */
export const MIN_EYELIGHT_SCALE = 2.0;

/** Screen-pixel pick radius for selecting figures and faces. */
export const PICK_RADIUS_PX = 12;

export type ToolEvent =
  | { type: "click"; point: Point }
  | { type: "key"; key: string }
  | { type: "cancel" };

export interface ToolContext {
  doc: AnnotationDocument;
  selectedFace: number | null;
  /** Current viewport scale (screen pixels per image pixel). */
  scale: number;
}

export type ToolState =
  | { tool: "horizon" }
  | { tool: "figure"; pending: Point[] }
  | { tool: "shadow"; figureIndex: number | null }
  | { tool: "face"; corner: Point | null }
  | { tool: "eyelight"; clicks: Point[] }
  | { tool: "category" };

export interface ToolResult {
  state: ToolState;
  edit?: Edit;
  /** undefined = selection unchanged; null = deselect. */
  selectFace?: number | null;
  cue?: string;
}

export function initialToolState(tool: ToolKind): ToolState {
  switch (tool) {
    case "horizon":
      return { tool: "horizon" };
    case "figure":
      return { tool: "figure", pending: [] };
    case "shadow":
      return { tool: "shadow", figureIndex: null };
    case "face":
      return { tool: "face", corner: null };
    case "eyelight":
      return { tool: "eyelight", clicks: [] };
    case "category":
      return { tool: "category" };
  }
}

function inBounds(p: Point, doc: AnnotationDocument): boolean {
  return (
    p.x >= 0 && p.x <= doc.meta.width_px && p.y >= 0 && p.y <= doc.meta.height_px
  );
}

/** Index of the face whose box contains `p` (topmost, i.e. last drawn). */
export function hitTestFace(doc: AnnotationDocument, p: Point): number | null {
  for (let i = doc.faces.length - 1; i >= 0; i -= 1) {
    const [x, y, w, h] = doc.faces[i].bbox;
    if (p.x >= x && p.x <= x + w && p.y >= y && p.y <= y + h) {
      return i;
    }
  }
  return null;
}

/** Index of the figure whose foot is nearest `p` within `radius`, else null. */
export function nearestFigureFoot(
  doc: AnnotationDocument,
  p: Point,
  radius: number,
): number | null {
  let best: number | null = null;
  let bestDist = radius;
  doc.figures.forEach((fig, i) => {
    const d = Math.hypot(fig.foot.x - p.x, fig.foot.y - p.y);
    if (d <= bestDist) {
      best = i;
      bestDist = d;
    }
  });
  return best;
}

const CATEGORY_BY_KEY = new Map<string, PoseGaze>(
  POSE_GAZE_CODES.map((code, i) => [String(i + 1), code]),
);

export function categoryForKey(key: string): PoseGaze | null {
  return CATEGORY_BY_KEY.get(key) ?? null;
}

export function handleToolEvent(
  state: ToolState,
  event: ToolEvent,
  ctx: ToolContext,
): ToolResult {
  switch (state.tool) {
    case "horizon":
      return horizonTool(state, event, ctx);
    case "figure":
      return figureTool(state, event, ctx);
    case "shadow":
      return shadowTool(state, event, ctx);
    case "face":
      return faceTool(state, event, ctx);
    case "eyelight":
      return eyelightTool(state, event, ctx);
    case "category":
      return categoryTool(state, event, ctx);
  }
}

function rejectOutside(state: ToolState): ToolResult {
  return { state, cue: "that click lands outside the image" };
}

function horizonTool(state: ToolState, event: ToolEvent, ctx: ToolContext): ToolResult {
  if (event.type !== "click") return { state };
  if (!inBounds(event.point, ctx.doc)) return rejectOutside(state);
  return { state, edit: { kind: "set_horizon", y: event.point.y } };
}

function figureTool(
  state: Extract<ToolState, { tool: "figure" }>,
  event: ToolEvent,
  ctx: ToolContext,
): ToolResult {
  if (event.type === "cancel") {
    if (state.pending.length === 2) {
      // head and foot placed; finishing without a shadow leg is allowed
      const [head, foot] = state.pending;
      return {
        state: { tool: "figure", pending: [] },
        edit: { kind: "add_figure", figure: { head, foot, shadow_end: null } },
      };
    }
    return { state: { tool: "figure", pending: [] } };
  }
  if (event.type !== "click") return { state };
  const p = event.point;
  if (!inBounds(p, ctx.doc)) return rejectOutside(state);

  if (state.pending.length === 0) {
    return { state: { tool: "figure", pending: [p] } };
  }
  if (state.pending.length === 1) {
    const head = state.pending[0];
    if (!(p.y > head.y)) {
      return { state, cue: "the foot must be below the head" };
    }
    return { state: { tool: "figure", pending: [head, p] } };
  }
  const [head, foot] = state.pending;
  if (p.x === foot.x && p.y === foot.y) {
    return { state, cue: "the shadow end must differ from the foot" };
  }
  return {
    state: { tool: "figure", pending: [] },
    edit: { kind: "add_figure", figure: { head, foot, shadow_end: p } },
  };
}

function shadowTool(
  state: Extract<ToolState, { tool: "shadow" }>,
  event: ToolEvent,
  ctx: ToolContext,
): ToolResult {
  if (event.type === "cancel") {
    return { state: { tool: "shadow", figureIndex: null } };
  }
  if (event.type !== "click") return { state };
  const p = event.point;
  if (!inBounds(p, ctx.doc)) return rejectOutside(state);

  if (state.figureIndex === null) {
    const index = nearestFigureFoot(ctx.doc, p, PICK_RADIUS_PX / ctx.scale);
    if (index === null) {
      return { state, cue: "click a figure's foot to attach its shadow" };
    }
    return { state: { tool: "shadow", figureIndex: index } };
  }
  const foot = ctx.doc.figures[state.figureIndex].foot;
  if (p.x === foot.x && p.y === foot.y) {
    return { state, cue: "the shadow end must differ from the foot" };
  }
  return {
    state: { tool: "shadow", figureIndex: null },
    edit: { kind: "set_shadow", index: state.figureIndex, shadow_end: p },
  };
}

function faceTool(
  state: Extract<ToolState, { tool: "face" }>,
  event: ToolEvent,
  ctx: ToolContext,
): ToolResult {
  if (event.type === "cancel") {
    return { state: { tool: "face", corner: null } };
  }
  if (event.type !== "click") return { state };
  const p = event.point;
  if (!inBounds(p, ctx.doc)) return rejectOutside(state);

  if (state.corner === null) {
    return { state: { tool: "face", corner: p } };
  }
  const a = state.corner;
  const x = Math.min(a.x, p.x);
  const y = Math.min(a.y, p.y);
  const w = Math.abs(p.x - a.x);
  const h = Math.abs(p.y - a.y);
  if (w === 0 || h === 0) {
    return { state, cue: "the box needs a nonzero width and height" };
  }
  const face: Face = { bbox: [x, y, w, h], category: "OTHER", eyelights: null };
  return {
    state: { tool: "face", corner: null },
    edit: { kind: "add_face", face },
    selectFace: ctx.doc.faces.length,
  };
}

/** Click order for a pair; exported so the UI can hint the next step. */
export const EYELIGHT_STEPS = [
  "left pupil",
  "left highlight",
  "right pupil",
  "right highlight",
] as const;

function eyelightTool(
  state: Extract<ToolState, { tool: "eyelight" }>,
  event: ToolEvent,
  ctx: ToolContext,
): ToolResult {
  if (event.type === "cancel") {
    return { state: { tool: "eyelight", clicks: [] } };
  }
  if (event.type !== "click") return { state };
  if (ctx.selectedFace === null) {
    return { state, cue: "select a face first (face tool or category tool)" };
  }
  if (ctx.scale < MIN_EYELIGHT_SCALE) {
    return {
      state,
      cue: `zoom in to at least ${MIN_EYELIGHT_SCALE}x to place eyelights`,
    };
  }
  const p = event.point;
  if (!inBounds(p, ctx.doc)) return rejectOutside(state);

  // highlight clicks (steps 2 and 4) may not repeat their pupil
  if (state.clicks.length % 2 === 1) {
    const pupil = state.clicks[state.clicks.length - 1];
    if (p.x === pupil.x && p.y === pupil.y) {
      return { state, cue: "the highlight must differ from the pupil" };
    }
  }
  const clicks = [...state.clicks, p];
  if (clicks.length < 4) {
    return { state: { tool: "eyelight", clicks } };
  }

  let [lp, lh, rp, rh] = clicks;
  if (lp.x === rp.x) {
    return {
      state: { tool: "eyelight", clicks: [] },
      cue: "the two pupils must not share an x coordinate",
    };
  }
  if (lp.x > rp.x) {
    // the annotator worked right eye first; store in left-to-right order
    [lp, lh, rp, rh] = [rp, rh, lp, lh];
  }
  const eyelights: EyelightPair = {
    left_pupil: lp,
    left_highlight: lh,
    right_pupil: rp,
    right_highlight: rh,
  };
  return {
    state: { tool: "eyelight", clicks: [] },
    edit: { kind: "set_eyelights", index: ctx.selectedFace, eyelights },
  };
}

function categoryTool(
  state: Extract<ToolState, { tool: "category" }>,
  event: ToolEvent,
  ctx: ToolContext,
): ToolResult {
  if (event.type === "click") {
    if (!inBounds(event.point, ctx.doc)) return rejectOutside(state);
    return { state, selectFace: hitTestFace(ctx.doc, event.point) };
  }
  if (event.type === "key") {
    const category = categoryForKey(event.key);
    if (category === null) return { state };
    if (ctx.selectedFace === null) {
      return { state, cue: "select a face to categorize" };
    }
    return {
      state,
      edit: { kind: "set_category", index: ctx.selectedFace, category },
    };
  }
  return { state };
}

/**
 * While an eyelight pair is half-placed the document must not be saved
 * (a pair is all-or-nothing); the save button uses this to disable with
 * a hint.
 */
export function savingBlockedReason(state: ToolState): string | null {
  if (state.tool === "eyelight" && state.clicks.length > 0) {
    const placed = state.clicks.length;
    return `finish the eyelight pair first (${placed}/4 points placed)`;
  }
  if (state.tool === "figure" && state.pending.length === 1) {
    return "finish the figure first (foot not placed)";
  }
  return null;
}
