/**
 * Edit operations over the in-memory document, plus an undo/redo stack.
 *
 * Edits are plain data and `applyEdit` is pure, so the stack's guarantee
 * is structural: after any sequence of edit/undo/redo operations the
 * current document equals the base document with the net edit list
 * replayed. Saving is separate — nothing here talks to the server.
 */

import type {
  AnnotationDocument,
  EyelightPair,
  Face,
  Figure,
  PoseGaze,
} from "./document.js";
import { cloneDocument, serializeDocument } from "./document.js";

export type Edit =
  | { kind: "set_horizon"; y: number }
  | { kind: "clear_horizon" }
  | { kind: "set_year"; year: number | null }
  | { kind: "add_figure"; figure: Figure }
  | { kind: "remove_figure"; index: number }
  | { kind: "set_shadow"; index: number; shadow_end: Figure["shadow_end"] }
  | { kind: "add_face"; face: Face }
  | { kind: "remove_face"; index: number }
  | { kind: "set_category"; index: number; category: PoseGaze }
  | { kind: "set_eyelights"; index: number; eyelights: EyelightPair | null };

function checkIndex(length: number, index: number, what: string): void {
  if (!Number.isInteger(index) || index < 0 || index >= length) {
    throw new RangeError(`no ${what} at index ${index}`);
  }
}

/** Apply one edit, returning a new document; the input is not mutated. */
export function applyEdit(doc: AnnotationDocument, edit: Edit): AnnotationDocument {
  const next = cloneDocument(doc);
  switch (edit.kind) {
    case "set_horizon":
      next.horizon = { y_h: edit.y };
      break;
    case "clear_horizon":
      next.horizon = null;
      break;
    case "set_year":
      next.meta.year = edit.year;
      break;
    case "add_figure":
      next.figures.push(structuredClone(edit.figure));
      break;
    case "remove_figure":
      checkIndex(next.figures.length, edit.index, "figure");
      next.figures.splice(edit.index, 1);
      break;
    case "set_shadow":
      checkIndex(next.figures.length, edit.index, "figure");
      next.figures[edit.index].shadow_end =
        edit.shadow_end === null ? null : { ...edit.shadow_end };
      break;
    case "add_face":
      next.faces.push(structuredClone(edit.face));
      break;
    case "remove_face":
      checkIndex(next.faces.length, edit.index, "face");
      next.faces.splice(edit.index, 1);
      break;
    case "set_category":
      checkIndex(next.faces.length, edit.index, "face");
      next.faces[edit.index].category = edit.category;
      break;
    case "set_eyelights":
      checkIndex(next.faces.length, edit.index, "face");
      next.faces[edit.index].eyelights =
        edit.eyelights === null ? null : structuredClone(edit.eyelights);
      break;
  }
  return next;
}

export function replayEdits(
  base: AnnotationDocument,
  edits: readonly Edit[],
): AnnotationDocument {
  return edits.reduce(applyEdit, cloneDocument(base));
}

export class EditStack {
  private base: AnnotationDocument;
  private edits: Edit[] = [];
  /** snapshots[i] is the document after applying edits[0..i). */
  private snapshots: AnnotationDocument[];
  private cursor = 0;
  private savedSerialized: string;

  constructor(base: AnnotationDocument) {
    this.base = cloneDocument(base);
    this.snapshots = [this.base];
    this.savedSerialized = serializeDocument(this.base);
  }

  current(): AnnotationDocument {
    return this.snapshots[this.cursor];
  }

  /** The edits currently in effect (what a replay must apply). */
  netEdits(): Edit[] {
    return this.edits.slice(0, this.cursor);
  }

  push(edit: Edit): void {
    const next = applyEdit(this.current(), edit);
    this.edits.length = this.cursor;
    this.snapshots.length = this.cursor + 1;
    this.edits.push(edit);
    this.snapshots.push(next);
    this.cursor += 1;
  }

  canUndo(): boolean {
    return this.cursor > 0;
  }

  canRedo(): boolean {
    return this.cursor < this.edits.length;
  }

  undo(): boolean {
    if (!this.canUndo()) return false;
    this.cursor -= 1;
    return true;
  }

  redo(): boolean {
    if (!this.canRedo()) return false;
    this.cursor += 1;
    return true;
  }

  /** Mark the current state as saved; dirty tracking is value-based. */
  markSaved(): void {
    this.savedSerialized = serializeDocument(this.current());
  }

  /** True iff the current document differs from the last saved state. */
  isDirty(): boolean {
    return serializeDocument(this.current()) !== this.savedSerialized;
  }

  /** Replace everything with a fresh base (e.g. the canonical PUT echo). */
  reset(base: AnnotationDocument): void {
    this.base = cloneDocument(base);
    this.edits = [];
    this.snapshots = [this.base];
    this.cursor = 0;
    this.savedSerialized = serializeDocument(this.base);
  }
}
