/**
 * Browser entry point: wires the pure annotation logic (document model,
 * edit stack, tool state machines, viewport math) to the DOM and canvas.
 *
 * Everything here is presentation; nothing in this file decides what a
 * valid document is or what a click means — those rules live in the
 * imported modules where they are unit-tested.
 */

import { ApiError, Client } from "./api.js";
import type { PaintingListing, AnalysisKind } from "./api.js";
import type { AnnotationDocument, Face, Point } from "./document.js";
import { validateDocument } from "./document.js";
import { EditStack } from "./edits.js";
import { CATEGORY_STRIP } from "./categories.js";
import { formatTilt, interocularDeltaDeg, tiltAngleDeg } from "./tilt.js";
import {
  EYELIGHT_STEPS,
  MIN_EYELIGHT_SCALE,
  TOOL_KINDS,
  categoryForKey,
  handleToolEvent,
  initialToolState,
  savingBlockedReason,
} from "./tools.js";
import type { ToolKind, ToolResult, ToolState } from "./tools.js";
import { fitToCanvas, panBy, screenToWorld, worldToScreen, zoomAt } from "./view.js";
import type { Viewport } from "./view.js";

// ---------------------------------------------------------------------------
// DOM handles

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("stage");
const maybeContext = canvas.getContext("2d");
if (maybeContext === null) throw new Error("2d canvas context unavailable");
const g: CanvasRenderingContext2D = maybeContext;

const paintingList = el<HTMLUListElement>("painting-list");
const paintingName = el<HTMLSpanElement>("painting-name");
const dirtyDot = el<HTMLSpanElement>("dirty-dot");
const yearLabel = el<HTMLLabelElement>("year-label");
const yearInput = el<HTMLInputElement>("year-input");
const undoBtn = el<HTMLButtonElement>("undo-btn");
const redoBtn = el<HTMLButtonElement>("redo-btn");
const saveBtn = el<HTMLButtonElement>("save-btn");
const saveHint = el<HTMLSpanElement>("save-hint");
const toolbar = el<HTMLDivElement>("toolbar");
const clearHorizonBtn = el<HTMLButtonElement>("clear-horizon-btn");
const categoryStrip = el<HTMLDivElement>("category-strip");
const faceInfo = el<HTMLDivElement>("face-info");
const tiltReadout = el<HTMLDivElement>("tilt-readout");
const problemsList = el<HTMLUListElement>("problems");
const analysisKindSelect = el<HTMLSelectElement>("analysis-kind");
const analysisBtn = el<HTMLButtonElement>("analysis-btn");
const cueLine = el<HTMLSpanElement>("cue");
const zoomLabel = el<HTMLSpanElement>("zoom-label");

// ---------------------------------------------------------------------------
// Application state

const client = new Client();

let paintings: PaintingListing[] = [];
let currentId: string | null = null;
let stack: EditStack | null = null;
let image: HTMLImageElement | null = null;
let viewport: Viewport = { scale: 1, offsetX: 0, offsetY: 0 };
let toolKind: ToolKind = "figure";
let toolState: ToolState = initialToolState(toolKind);
let selectedFace: number | null = null;

let transientCue: string | null = null;
let transientWarn = false;
let cueTimer: number | undefined;
let tiltToken = 0;
let lastCursor: Point | null = null; // screen coords, for rubber bands

const TOOL_LABELS: Record<ToolKind, { label: string; key: string }> = {
  horizon: { label: "horizon", key: "h" },
  figure: { label: "figure", key: "f" },
  shadow: { label: "shadow", key: "s" },
  face: { label: "face box", key: "b" },
  eyelight: { label: "eyelight", key: "e" },
  category: { label: "categorize", key: "c" },
};

// ---------------------------------------------------------------------------
// Cue / status line

function showCue(text: string, warn = false): void {
  transientCue = text;
  transientWarn = warn;
  if (cueTimer !== undefined) window.clearTimeout(cueTimer);
  cueTimer = window.setTimeout(() => {
    transientCue = null;
    transientWarn = false;
    updateChrome();
  }, 4000);
  updateChrome();
}

/** Context-sensitive instruction shown while no transient cue is active. */
function statusHint(): string {
  if (stack === null) return "select a painting to begin";
  switch (toolState.tool) {
    case "horizon":
      return "click to place the horizon line";
    case "figure":
      if (toolState.pending.length === 0) return "click the top of the head";
      if (toolState.pending.length === 1) return "click the foot (below the head)";
      return "click the shadow end, or press Esc to finish without one";
    case "shadow":
      return toolState.figureIndex === null
        ? "click a figure's foot to attach its shadow"
        : "click where the shadow ends";
    case "face":
      return toolState.corner === null
        ? "click the first corner of the face box"
        : "click the opposite corner";
    case "eyelight": {
      if (selectedFace === null) return "select a face first (face tool or categorize tool)";
      if (viewport.scale < MIN_EYELIGHT_SCALE) {
        return `zoom in to at least ${MIN_EYELIGHT_SCALE}x to place eyelights`;
      }
      return `click the ${EYELIGHT_STEPS[toolState.clicks.length]}`;
    }
    case "category":
      return "click a face, then press 1–6 or a card on the right";
  }
}

// ---------------------------------------------------------------------------
// Painting list

function renderPaintingList(): void {
  paintingList.replaceChildren();
  for (const p of paintings) {
    const li = document.createElement("li");
    li.classList.toggle("active", p.id === currentId);

    const pid = document.createElement("span");
    pid.className = "pid";
    pid.textContent = p.id;
    li.appendChild(pid);

    const year = document.createElement("span");
    year.className = "year";
    year.textContent = p.year === null ? "—" : String(p.year);
    li.appendChild(year);

    if (p.annotated) {
      const badge = document.createElement("span");
      badge.className = "badge annotated";
      badge.title = "has saved annotations";
      badge.textContent = "✓";
      li.appendChild(badge);
    }
    if (!p.has_image) {
      const badge = document.createElement("span");
      badge.className = "badge noimage";
      badge.title = "no image file";
      badge.textContent = "⌀";
      li.appendChild(badge);
    }

    li.addEventListener("click", () => {
      void selectPainting(p.id);
    });
    paintingList.appendChild(li);
  }
}

function loadImage(url: string): Promise<HTMLImageElement> {
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.onload = () => resolve(img);
    img.onerror = () => reject(new Error(`image failed to load: ${url}`));
    img.src = url;
  });
}

async function selectPainting(id: string): Promise<void> {
  if (id === currentId) return;
  if (stack !== null && stack.isDirty()) {
    const ok = window.confirm("Discard unsaved changes to the current painting?");
    if (!ok) return;
  }
  let doc: AnnotationDocument;
  try {
    doc = await client.fetchAnnotations(id);
  } catch (err) {
    showCue(errorText(err), true);
    return;
  }

  const listing = paintings.find((p) => p.id === id);
  image = null;
  if (listing !== undefined && listing.has_image) {
    try {
      image = await loadImage(client.imageUrl(id));
    } catch {
      showCue("the painting image failed to load; annotating on a placeholder", true);
    }
  }

  currentId = id;
  stack = new EditStack(doc);
  toolState = initialToolState(toolKind);
  selectedFace = null;
  viewport = fitToCanvas(
    doc.meta.width_px,
    doc.meta.height_px,
    canvas.clientWidth,
    canvas.clientHeight,
    24,
  );
  renderPaintingList();
  refresh();
}

// ---------------------------------------------------------------------------
// Edits and tool dispatch

function refresh(): void {
  updateChrome();
  scheduleRender();
}

function applyToolResult(result: ToolResult): void {
  toolState = result.state;
  if (result.edit !== undefined && stack !== null) {
    stack.push(result.edit);
  }
  if ("selectFace" in result) {
    selectedFace = result.selectFace ?? null;
  }
  if (result.cue !== undefined) {
    showCue(result.cue, true);
  }
  clampSelectedFace();
  refresh();
}

/** Keep the face selection meaningful after undo/redo or deletions. */
function clampSelectedFace(): void {
  if (stack === null) {
    selectedFace = null;
    return;
  }
  const n = stack.current().faces.length;
  if (selectedFace !== null && (selectedFace < 0 || selectedFace >= n)) {
    selectedFace = null;
  }
}

function dispatchToolClick(world: Point): void {
  if (stack === null) return;
  const result = handleToolEvent(
    toolState,
    { type: "click", point: world },
    { doc: stack.current(), selectedFace, scale: viewport.scale },
  );
  applyToolResult(result);
}

function dispatchToolCancel(): void {
  if (stack === null) return;
  const result = handleToolEvent(
    toolState,
    { type: "cancel" },
    { doc: stack.current(), selectedFace, scale: viewport.scale },
  );
  applyToolResult(result);
}

function setTool(kind: ToolKind): void {
  if (kind === toolKind && toolState.tool === kind) return;
  toolKind = kind;
  toolState = initialToolState(kind);
  refresh();
}

function setCategoryOnSelected(key: string): void {
  const category = categoryForKey(key);
  if (category === null || stack === null) return;
  if (selectedFace === null) {
    showCue("select a face to categorize", true);
    return;
  }
  stack.push({ kind: "set_category", index: selectedFace, category });
  refresh();
}

function undo(): void {
  if (stack !== null && stack.undo()) {
    clampSelectedFace();
    refresh();
  }
}

function redo(): void {
  if (stack !== null && stack.redo()) {
    clampSelectedFace();
    refresh();
  }
}

// ---------------------------------------------------------------------------
// Saving

async function saveCurrent(): Promise<void> {
  if (stack === null || currentId === null) return;
  const blocked = savingBlockedReason(toolState);
  if (blocked !== null) {
    showCue(blocked, true);
    return;
  }
  const doc = stack.current();
  const problems = validateDocument(doc);
  if (problems.length > 0) {
    showCue(`cannot save: ${problems[0]}`, true);
    return;
  }
  saveBtn.disabled = true;
  try {
    const echo = await client.saveAnnotations(currentId, doc);
    stack.reset(echo);
    clampSelectedFace();
    const listing = paintings.find((p) => p.id === currentId);
    if (listing !== undefined) listing.annotated = true;
    renderPaintingList();
    showCue("saved ✓");
  } catch (err) {
    showCue(errorText(err), true);
  }
  refresh();
}

function errorText(err: unknown): string {
  if (err instanceof ApiError) {
    return err.errorClass === null ? err.message : `${err.errorClass}: ${err.message}`;
  }
  return err instanceof Error ? err.message : String(err);
}

// ---------------------------------------------------------------------------
// Chrome (everything outside the canvas)

function updateChrome(): void {
  const doc = stack?.current() ?? null;

  paintingName.textContent = currentId ?? "no painting loaded";
  dirtyDot.hidden = !(stack?.isDirty() ?? false);

  yearLabel.hidden = doc === null;
  if (doc !== null && document.activeElement !== yearInput) {
    yearInput.value = doc.meta.year === null ? "" : String(doc.meta.year);
  }

  undoBtn.disabled = !(stack?.canUndo() ?? false);
  redoBtn.disabled = !(stack?.canRedo() ?? false);

  const blocked = stack === null ? "load a painting" : savingBlockedReason(toolState);
  const problems = doc === null ? [] : validateDocument(doc);
  saveBtn.disabled = stack === null || blocked !== null || problems.length > 0;
  if (blocked !== null && stack !== null) {
    saveHint.textContent = blocked;
  } else if (problems.length > 0) {
    saveHint.textContent = `${problems.length} problem${problems.length === 1 ? "" : "s"}`;
  } else {
    saveHint.textContent = "";
  }

  clearHorizonBtn.disabled = doc === null || doc.horizon === null;

  problemsList.replaceChildren();
  for (const problem of problems) {
    const li = document.createElement("li");
    li.textContent = problem;
    problemsList.appendChild(li);
  }

  for (const button of toolbar.querySelectorAll("button.tool")) {
    const b = button as HTMLButtonElement;
    b.classList.toggle("active", b.dataset.tool === toolState.tool);
  }

  updateFacePanel(doc);

  cueLine.textContent = transientCue ?? statusHint();
  cueLine.classList.toggle("warn", transientCue !== null && transientWarn);
  zoomLabel.textContent = stack === null ? "" : `${viewport.scale.toFixed(2)}x`;
}

function updateFacePanel(doc: AnnotationDocument | null): void {
  const face: Face | null =
    doc !== null && selectedFace !== null ? doc.faces[selectedFace] : null;

  for (const card of categoryStrip.querySelectorAll(".cat")) {
    const c = card as HTMLElement;
    c.classList.toggle("current", face !== null && c.dataset.code === face.category);
  }

  if (doc === null || face === null || selectedFace === null) {
    faceInfo.textContent = doc === null || doc.faces.length === 0 ? "none" : "none selected";
    tiltReadout.textContent = "";
    return;
  }

  const entry = CATEGORY_STRIP.find((e) => e.code === face.category);
  faceInfo.replaceChildren();
  const line = document.createElement("div");
  line.textContent = `face ${selectedFace + 1} of ${doc.faces.length} — ${face.category}${
    entry !== undefined ? ` (${entry.label})` : ""
  }`;
  faceInfo.appendChild(line);

  const actions = document.createElement("div");
  actions.id = "face-actions";
  const del = document.createElement("button");
  del.textContent = "delete face";
  del.addEventListener("click", () => {
    if (stack === null || selectedFace === null) return;
    stack.push({ kind: "remove_face", index: selectedFace });
    selectedFace = null;
    refresh();
  });
  actions.appendChild(del);
  if (face.eyelights !== null) {
    const clear = document.createElement("button");
    clear.textContent = "clear eyelights";
    clear.addEventListener("click", () => {
      if (stack === null || selectedFace === null) return;
      stack.push({ kind: "set_eyelights", index: selectedFace, eyelights: null });
      refresh();
    });
    actions.appendChild(clear);
  }
  faceInfo.appendChild(actions);

  updateTiltReadout(face);
}

/**
 * Tilt panel: instant numbers from the local formula, then the same pair
 * confirmed by the server (the server's answer is authoritative; when it
 * arrives it replaces the local one, labelled accordingly).
 */
function updateTiltReadout(face: Face): void {
  const pair = face.eyelights;
  if (pair === null) {
    tiltReadout.textContent = "no eyelights placed";
    tiltToken += 1;
    return;
  }
  let leftLocal: number;
  let rightLocal: number;
  try {
    leftLocal = tiltAngleDeg(pair.left_pupil, pair.left_highlight);
    rightLocal = tiltAngleDeg(pair.right_pupil, pair.right_highlight);
  } catch {
    tiltReadout.textContent = "tilt undefined (highlight on pupil)";
    return;
  }
  const delta = interocularDeltaDeg(pair);
  const show = (l: number, r: number, source: string): void => {
    tiltReadout.textContent =
      `left  ${formatTilt(l)}\n` +
      `right ${formatTilt(r)}\n` +
      `delta ${formatTilt(delta)} (right − left)  [${source}]`;
  };
  show(leftLocal, rightLocal, "local");

  const token = ++tiltToken;
  void (async () => {
    try {
      const [leftServer, rightServer] = await Promise.all([
        client.tiltPreview(pair.left_pupil, pair.left_highlight),
        client.tiltPreview(pair.right_pupil, pair.right_highlight),
      ]);
      if (token !== tiltToken) return;
      show(leftServer, rightServer, "server");
    } catch {
      // offline or mid-reload: the local numbers stay up
    }
  })();
}

// ---------------------------------------------------------------------------
// Canvas rendering

let renderQueued = false;
function scheduleRender(): void {
  if (renderQueued) return;
  renderQueued = true;
  window.requestAnimationFrame(() => {
    renderQueued = false;
    render();
  });
}

function resizeCanvas(): void {
  const dpr = window.devicePixelRatio || 1;
  const w = Math.max(1, Math.round(canvas.clientWidth * dpr));
  const h = Math.max(1, Math.round(canvas.clientHeight * dpr));
  if (canvas.width !== w || canvas.height !== h) {
    canvas.width = w;
    canvas.height = h;
  }
}

function render(): void {
  resizeCanvas();
  const dpr = window.devicePixelRatio || 1;
  g.setTransform(dpr, 0, 0, dpr, 0, 0);
  g.clearRect(0, 0, canvas.clientWidth, canvas.clientHeight);

  const doc = stack?.current() ?? null;
  if (doc === null) {
    g.fillStyle = "#5b6067";
    g.font = "14px system-ui, sans-serif";
    g.textAlign = "center";
    g.fillText(
      "select a painting from the list",
      canvas.clientWidth / 2,
      canvas.clientHeight / 2,
    );
    g.textAlign = "start";
    return;
  }

  // --- the painting itself (world space) ---
  g.save();
  g.translate(viewport.offsetX, viewport.offsetY);
  g.scale(viewport.scale, viewport.scale);
  g.imageSmoothingEnabled = viewport.scale < 3;
  if (image !== null) {
    g.drawImage(image, 0, 0, doc.meta.width_px, doc.meta.height_px);
  } else {
    g.fillStyle = "#3a3e45";
    g.fillRect(0, 0, doc.meta.width_px, doc.meta.height_px);
  }
  g.restore();

  // frame around the image
  const tl = worldToScreen(viewport, { x: 0, y: 0 });
  const br = worldToScreen(viewport, { x: doc.meta.width_px, y: doc.meta.height_px });
  g.strokeStyle = "#50555d";
  g.lineWidth = 1;
  g.strokeRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);

  // --- overlays (screen space so stroke widths stay constant) ---
  drawHorizon(doc, tl, br);
  doc.figures.forEach((_, i) => drawFigure(doc, i));
  doc.faces.forEach((_, i) => drawFace(doc, i));
  drawPending();
}

function drawHorizon(
  doc: AnnotationDocument,
  tl: Point,
  br: Point,
): void {
  if (doc.horizon === null) return;
  const y = worldToScreen(viewport, { x: 0, y: doc.horizon.y_h }).y;
  g.strokeStyle = "#e3b34b";
  g.lineWidth = 1.5;
  g.setLineDash([8, 5]);
  g.beginPath();
  g.moveTo(tl.x, y);
  g.lineTo(br.x, y);
  g.stroke();
  g.setLineDash([]);
  g.fillStyle = "#e3b34b";
  g.font = "11px system-ui, sans-serif";
  g.fillText("horizon", tl.x + 4, y - 4);
}

function drawDisc(p: Point, r: number, fill: string): void {
  g.beginPath();
  g.arc(p.x, p.y, r, 0, Math.PI * 2);
  g.fillStyle = fill;
  g.fill();
}

function drawCircle(p: Point, r: number, stroke: string, width = 1.5): void {
  g.beginPath();
  g.arc(p.x, p.y, r, 0, Math.PI * 2);
  g.strokeStyle = stroke;
  g.lineWidth = width;
  g.stroke();
}

function drawFigure(doc: AnnotationDocument, index: number): void {
  const fig = doc.figures[index];
  const head = worldToScreen(viewport, fig.head);
  const foot = worldToScreen(viewport, fig.foot);
  const picked = toolState.tool === "shadow" && toolState.figureIndex === index;

  g.strokeStyle = picked ? "#8fd0ff" : "#4f9cf0";
  g.lineWidth = picked ? 2.5 : 1.5;
  g.beginPath();
  g.moveTo(head.x, head.y);
  g.lineTo(foot.x, foot.y);
  g.stroke();
  drawDisc(head, 3, "#4f9cf0");
  drawDisc(foot, 3.5, picked ? "#8fd0ff" : "#4f9cf0");

  if (fig.shadow_end !== null) {
    const end = worldToScreen(viewport, fig.shadow_end);
    g.strokeStyle = "#9a7fd0";
    g.lineWidth = 1.5;
    g.setLineDash([5, 4]);
    g.beginPath();
    g.moveTo(foot.x, foot.y);
    g.lineTo(end.x, end.y);
    g.stroke();
    g.setLineDash([]);
    g.fillStyle = "#9a7fd0";
    g.fillRect(end.x - 2.5, end.y - 2.5, 5, 5);
  }
}

function drawFace(doc: AnnotationDocument, index: number): void {
  const face = doc.faces[index];
  const [x, y, w, h] = face.bbox;
  const a = worldToScreen(viewport, { x, y });
  const b = worldToScreen(viewport, { x: x + w, y: y + h });
  const selected = index === selectedFace;

  if (selected) {
    g.fillStyle = "rgba(111, 191, 115, 0.12)";
    g.fillRect(a.x, a.y, b.x - a.x, b.y - a.y);
  }
  g.strokeStyle = selected ? "#6fbf73" : "#5d9e62";
  g.lineWidth = selected ? 2 : 1.25;
  g.strokeRect(a.x, a.y, b.x - a.x, b.y - a.y);
  g.fillStyle = selected ? "#6fbf73" : "#5d9e62";
  g.font = "11px system-ui, sans-serif";
  g.fillText(face.category, a.x + 2, a.y - 3);

  const pair = face.eyelights;
  if (pair !== null) {
    // constant screen radius: the marker is a display aid, not a measurement
    for (const eye of [
      { pupil: pair.left_pupil, highlight: pair.left_highlight },
      { pupil: pair.right_pupil, highlight: pair.right_highlight },
    ]) {
      const pupil = worldToScreen(viewport, eye.pupil);
      const highlight = worldToScreen(viewport, eye.highlight);
      g.strokeStyle = "rgba(255, 255, 255, 0.55)";
      g.lineWidth = 1;
      g.beginPath();
      g.moveTo(pupil.x, pupil.y);
      g.lineTo(highlight.x, highlight.y);
      g.stroke();
      drawCircle(pupil, 5, "#f0e14f");
      drawDisc(highlight, 2.5, "#ffffff");
    }
  }
}

function drawCross(p: Point, color: string): void {
  g.strokeStyle = color;
  g.lineWidth = 1.5;
  g.beginPath();
  g.moveTo(p.x - 5, p.y);
  g.lineTo(p.x + 5, p.y);
  g.moveTo(p.x, p.y - 5);
  g.lineTo(p.x, p.y + 5);
  g.stroke();
}

/** In-progress placements: pending figure points, face corner, eyelight clicks. */
function drawPending(): void {
  if (toolState.tool === "figure") {
    for (const p of toolState.pending) {
      drawCross(worldToScreen(viewport, p), "#8fd0ff");
    }
    if (toolState.pending.length > 0 && lastCursor !== null) {
      const from = worldToScreen(
        viewport,
        toolState.pending[toolState.pending.length - 1],
      );
      g.strokeStyle = "rgba(143, 208, 255, 0.5)";
      g.lineWidth = 1;
      g.setLineDash([3, 3]);
      g.beginPath();
      g.moveTo(from.x, from.y);
      g.lineTo(lastCursor.x, lastCursor.y);
      g.stroke();
      g.setLineDash([]);
    }
  } else if (toolState.tool === "face" && toolState.corner !== null) {
    const a = worldToScreen(viewport, toolState.corner);
    drawCross(a, "#6fbf73");
    if (lastCursor !== null) {
      g.strokeStyle = "rgba(111, 191, 115, 0.6)";
      g.lineWidth = 1;
      g.setLineDash([3, 3]);
      g.strokeRect(
        Math.min(a.x, lastCursor.x),
        Math.min(a.y, lastCursor.y),
        Math.abs(lastCursor.x - a.x),
        Math.abs(lastCursor.y - a.y),
      );
      g.setLineDash([]);
    }
  } else if (toolState.tool === "eyelight") {
    toolState.clicks.forEach((p, i) => {
      const s = worldToScreen(viewport, p);
      drawCross(s, "#f0e14f");
      g.fillStyle = "#f0e14f";
      g.font = "10px system-ui, sans-serif";
      g.fillText(String(i + 1), s.x + 6, s.y - 6);
    });
  }
}

// ---------------------------------------------------------------------------
// Pointer and keyboard input

interface PointerDrag {
  pointerId: number;
  lastX: number;
  lastY: number;
  downX: number;
  downY: number;
  panning: boolean;
  forcePan: boolean;
}

let drag: PointerDrag | null = null;
let spaceHeld = false;

function screenPos(e: PointerEvent | WheelEvent): Point {
  const rect = canvas.getBoundingClientRect();
  return { x: e.clientX - rect.left, y: e.clientY - rect.top };
}

canvas.addEventListener("pointerdown", (e) => {
  const pos = screenPos(e);
  drag = {
    pointerId: e.pointerId,
    lastX: pos.x,
    lastY: pos.y,
    downX: pos.x,
    downY: pos.y,
    panning: false,
    forcePan: e.button === 1 || e.button === 2 || spaceHeld,
  };
  canvas.setPointerCapture(e.pointerId);
});

canvas.addEventListener("pointermove", (e) => {
  const pos = screenPos(e);
  lastCursor = pos;
  if (drag !== null && e.pointerId === drag.pointerId) {
    const moved = Math.hypot(pos.x - drag.downX, pos.y - drag.downY);
    if (drag.forcePan || drag.panning || moved > 4) {
      drag.panning = true;
      canvas.classList.add("panning");
      viewport = panBy(viewport, pos.x - drag.lastX, pos.y - drag.lastY);
    }
    drag.lastX = pos.x;
    drag.lastY = pos.y;
    scheduleRender();
    return;
  }
  // rubber bands track the cursor
  if (
    (toolState.tool === "figure" && toolState.pending.length > 0) ||
    (toolState.tool === "face" && toolState.corner !== null)
  ) {
    scheduleRender();
  }
});

canvas.addEventListener("pointerup", (e) => {
  if (drag === null || e.pointerId !== drag.pointerId) return;
  const wasClick = !drag.panning && !drag.forcePan;
  drag = null;
  canvas.classList.remove("panning");
  if (wasClick && e.button === 0) {
    dispatchToolClick(screenToWorld(viewport, screenPos(e)));
  } else {
    updateChrome();
  }
});

canvas.addEventListener("pointercancel", () => {
  drag = null;
  canvas.classList.remove("panning");
});

canvas.addEventListener("contextmenu", (e) => e.preventDefault());

canvas.addEventListener(
  "wheel",
  (e) => {
    e.preventDefault();
    if (stack === null) return;
    const factor = Math.exp(-e.deltaY * 0.0015);
    viewport = zoomAt(viewport, screenPos(e), factor);
    refresh();
  },
  { passive: false },
);

function isEditableTarget(target: EventTarget | null): boolean {
  return (
    target instanceof HTMLInputElement ||
    target instanceof HTMLSelectElement ||
    target instanceof HTMLTextAreaElement
  );
}

window.addEventListener("keydown", (e) => {
  if (isEditableTarget(e.target)) return;

  if ((e.ctrlKey || e.metaKey) && e.key.toLowerCase() === "z") {
    e.preventDefault();
    if (e.shiftKey) redo();
    else undo();
    return;
  }
  if ((e.ctrlKey || e.metaKey) && e.key.toLowerCase() === "y") {
    e.preventDefault();
    redo();
    return;
  }
  if ((e.ctrlKey || e.metaKey) && e.key.toLowerCase() === "s") {
    e.preventDefault();
    void saveCurrent();
    return;
  }
  if (e.ctrlKey || e.metaKey || e.altKey) return;

  if (e.key === " ") {
    spaceHeld = true;
    e.preventDefault();
    return;
  }
  if (e.key === "Escape") {
    dispatchToolCancel();
    return;
  }
  if (categoryForKey(e.key) !== null) {
    setCategoryOnSelected(e.key);
    return;
  }
  const toolForKey = TOOL_KINDS.find((k) => TOOL_LABELS[k].key === e.key.toLowerCase());
  if (toolForKey !== undefined) {
    setTool(toolForKey);
  }
});

window.addEventListener("keyup", (e) => {
  if (e.key === " ") spaceHeld = false;
});

window.addEventListener("beforeunload", (e) => {
  if (stack !== null && stack.isDirty()) {
    e.preventDefault();
    e.returnValue = "";
  }
});

// ---------------------------------------------------------------------------
// Static chrome wiring

function buildToolbar(): void {
  toolbar.replaceChildren();
  for (const kind of TOOL_KINDS) {
    const { label, key } = TOOL_LABELS[kind];
    const button = document.createElement("button");
    button.className = "tool";
    button.dataset.tool = kind;
    button.textContent = label;
    const hint = document.createElement("span");
    hint.className = "key";
    hint.textContent = key;
    button.appendChild(hint);
    button.addEventListener("click", () => setTool(kind));
    toolbar.appendChild(button);
  }
}

function buildCategoryStrip(): void {
  categoryStrip.replaceChildren();
  for (const entry of CATEGORY_STRIP) {
    const card = document.createElement("div");
    card.className = "cat";
    card.dataset.code = entry.code;
    card.title = entry.label;

    const img = document.createElement("img");
    img.src = entry.thumbnail;
    img.alt = entry.label;
    card.appendChild(img);

    const code = document.createElement("div");
    code.className = "code";
    code.textContent = entry.code;
    card.appendChild(code);

    const key = document.createElement("div");
    key.className = "key";
    key.textContent = `key ${entry.key}`;
    card.appendChild(key);

    card.addEventListener("click", () => setCategoryOnSelected(entry.key));
    categoryStrip.appendChild(card);
  }
}

undoBtn.addEventListener("click", undo);
redoBtn.addEventListener("click", redo);
saveBtn.addEventListener("click", () => {
  void saveCurrent();
});

clearHorizonBtn.addEventListener("click", () => {
  if (stack === null || stack.current().horizon === null) return;
  stack.push({ kind: "clear_horizon" });
  refresh();
});

yearInput.addEventListener("change", () => {
  if (stack === null) return;
  const raw = yearInput.value.trim();
  const year = raw === "" ? null : Number(raw);
  if (year !== null && !Number.isInteger(year)) {
    showCue("the year must be a whole number", true);
    updateChrome();
    return;
  }
  if (year !== stack.current().meta.year) {
    stack.push({ kind: "set_year", year });
    refresh();
  }
});

analysisBtn.addEventListener("click", () => {
  void (async () => {
    const kind = analysisKindSelect.value as AnalysisKind;
    analysisBtn.disabled = true;
    try {
      const result = await client.analyze(kind);
      const blob = new Blob([result.csv], { type: "text/csv" });
      const url = URL.createObjectURL(blob);
      const a = document.createElement("a");
      a.href = url;
      a.download = `${kind}.csv`;
      a.click();
      URL.revokeObjectURL(url);
      if (result.warnings.length > 0) {
        showCue(`exported with ${result.warnings.length} warning(s): ${result.warnings[0]}`, true);
      } else {
        showCue(`exported ${kind}.csv`);
      }
    } catch (err) {
      showCue(errorText(err), true);
    } finally {
      analysisBtn.disabled = false;
    }
  })();
});

const resizeObserver = new ResizeObserver(() => scheduleRender());
resizeObserver.observe(el<HTMLElement>("stage-wrap"));

// ---------------------------------------------------------------------------
// Boot

async function boot(): Promise<void> {
  buildToolbar();
  buildCategoryStrip();
  updateChrome();
  scheduleRender();
  try {
    paintings = await client.listPaintings();
  } catch (err) {
    showCue(errorText(err), true);
    return;
  }
  renderPaintingList();
  if (paintings.length === 0) {
    showCue("the corpus has no paintings", true);
    return;
  }
  await selectPainting(paintings[0].id);
}

void boot();
