/**
 * Client-side mirror of the annotation document schema.
 *
 * The server is the authority: every PUT is revalidated there and the
 * response body is the canonical serialization. This module keeps an
 * honest local copy — exactly the schema fields, nothing invented — and
 * mirrors the server's invariants so problems surface inline before a
 * save round-trip.
 */

export interface Point {
  x: number;
  y: number;
}

export interface Horizon {
  y_h: number;
}

export interface Figure {
  head: Point;
  foot: Point;
  shadow_end: Point | null;
}

export const POSE_GAZE_CODES = ["LL", "LF", "FF", "RF", "RR", "OTHER"] as const;
export type PoseGaze = (typeof POSE_GAZE_CODES)[number];

export interface EyelightPair {
  left_pupil: Point;
  left_highlight: Point;
  right_pupil: Point;
  right_highlight: Point;
}

export interface Face {
  bbox: [number, number, number, number];
  category: PoseGaze;
  eyelights: EyelightPair | null;
}

export interface Meta {
  id: string;
  title: string;
  year: number | null;
  width_px: number;
  height_px: number;
  image_path: string;
}

export interface AnnotationDocument {
  version: 1;
  meta: Meta;
  horizon: Horizon | null;
  figures: Figure[];
  faces: Face[];
}

export class DocumentFormatError extends Error {}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function asNumber(value: unknown, where: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new DocumentFormatError(`${where}: expected a finite number`);
  }
  return value;
}

function asPoint(value: unknown, where: string): Point {
  if (!isRecord(value)) {
    throw new DocumentFormatError(`${where}: expected {x, y}`);
  }
  return { x: asNumber(value.x, `${where}.x`), y: asNumber(value.y, `${where}.y`) };
}

function asOptional<T>(
  value: unknown,
  where: string,
  convert: (v: unknown, w: string) => T,
): T | null {
  return value === null || value === undefined ? null : convert(value, where);
}

function asCategory(value: unknown, where: string): PoseGaze {
  if (typeof value !== "string" || !(POSE_GAZE_CODES as readonly string[]).includes(value)) {
    throw new DocumentFormatError(
      `${where}: expected one of ${POSE_GAZE_CODES.join(", ")}`,
    );
  }
  return value as PoseGaze;
}

/** Parse a document received from the server; throws DocumentFormatError. */
export function parseDocument(json: string): AnnotationDocument {
  let data: unknown;
  try {
    data = JSON.parse(json);
  } catch (e) {
    throw new DocumentFormatError(`not valid JSON: ${(e as Error).message}`);
  }
  if (!isRecord(data)) {
    throw new DocumentFormatError("document: expected an object");
  }
  if (data.version !== 1) {
    throw new DocumentFormatError(`version: unsupported value ${String(data.version)}`);
  }
  const metaRaw = data.meta;
  if (!isRecord(metaRaw)) {
    throw new DocumentFormatError("meta: expected an object");
  }
  if (typeof metaRaw.id !== "string" || typeof metaRaw.title !== "string") {
    throw new DocumentFormatError("meta: id and title must be strings");
  }
  if (typeof metaRaw.image_path !== "string") {
    throw new DocumentFormatError("meta.image_path: expected a string");
  }
  const meta: Meta = {
    id: metaRaw.id,
    title: metaRaw.title,
    year:
      metaRaw.year === null || metaRaw.year === undefined
        ? null
        : asNumber(metaRaw.year, "meta.year"),
    width_px: asNumber(metaRaw.width_px, "meta.width_px"),
    height_px: asNumber(metaRaw.height_px, "meta.height_px"),
    image_path: metaRaw.image_path,
  };

  const horizon = asOptional(data.horizon, "horizon", (v, w) => {
    if (!isRecord(v)) throw new DocumentFormatError(`${w}: expected {y_h}`);
    return { y_h: asNumber(v.y_h, `${w}.y_h`) };
  });

  if (!Array.isArray(data.figures)) {
    throw new DocumentFormatError("figures: expected an array");
  }
  const figures = data.figures.map((raw, i): Figure => {
    const where = `figures[${i}]`;
    if (!isRecord(raw)) throw new DocumentFormatError(`${where}: expected an object`);
    return {
      head: asPoint(raw.head, `${where}.head`),
      foot: asPoint(raw.foot, `${where}.foot`),
      shadow_end: asOptional(raw.shadow_end, `${where}.shadow_end`, asPoint),
    };
  });

  if (!Array.isArray(data.faces)) {
    throw new DocumentFormatError("faces: expected an array");
  }
  const faces = data.faces.map((raw, i): Face => {
    const where = `faces[${i}]`;
    if (!isRecord(raw)) throw new DocumentFormatError(`${where}: expected an object`);
    const bboxRaw = raw.bbox;
    if (!Array.isArray(bboxRaw) || bboxRaw.length !== 4) {
      throw new DocumentFormatError(`${where}.bbox: expected [x, y, w, h]`);
    }
    const bbox = bboxRaw.map((v, k) => asNumber(v, `${where}.bbox[${k}]`)) as [
      number,
      number,
      number,
      number,
    ];
    return {
      bbox,
      category: asCategory(raw.category, `${where}.category`),
      eyelights: asOptional(raw.eyelights, `${where}.eyelights`, (v, w) => {
        if (!isRecord(v)) throw new DocumentFormatError(`${w}: expected an object`);
        return {
          left_pupil: asPoint(v.left_pupil, `${w}.left_pupil`),
          left_highlight: asPoint(v.left_highlight, `${w}.left_highlight`),
          right_pupil: asPoint(v.right_pupil, `${w}.right_pupil`),
          right_highlight: asPoint(v.right_highlight, `${w}.right_highlight`),
        };
      }),
    };
  });

  return { version: 1, meta, horizon, figures, faces };
}

/**
 * Serialize for a PUT. Emits exactly the schema fields (optional ones as
 * explicit nulls, matching the server's canonical form); the server
 * re-canonicalizes whitespace and key order on write.
 */
export function serializeDocument(doc: AnnotationDocument): string {
  const body = {
    faces: doc.faces.map((f) => ({
      bbox: f.bbox,
      category: f.category,
      eyelights:
        f.eyelights === null
          ? null
          : {
              left_highlight: pointBody(f.eyelights.left_highlight),
              left_pupil: pointBody(f.eyelights.left_pupil),
              right_highlight: pointBody(f.eyelights.right_highlight),
              right_pupil: pointBody(f.eyelights.right_pupil),
            },
    })),
    figures: doc.figures.map((fig) => ({
      foot: pointBody(fig.foot),
      head: pointBody(fig.head),
      shadow_end: fig.shadow_end === null ? null : pointBody(fig.shadow_end),
    })),
    horizon: doc.horizon === null ? null : { y_h: doc.horizon.y_h },
    meta: {
      height_px: doc.meta.height_px,
      id: doc.meta.id,
      image_path: doc.meta.image_path,
      title: doc.meta.title,
      width_px: doc.meta.width_px,
      year: doc.meta.year,
    },
    version: doc.version,
  };
  return JSON.stringify(body, null, 2) + "\n";
}

function pointBody(p: Point): Point {
  return { x: p.x, y: p.y };
}

export function cloneDocument(doc: AnnotationDocument): AnnotationDocument {
  return parseDocument(serializeDocument(doc));
}

export function documentsEqual(a: AnnotationDocument, b: AnnotationDocument): boolean {
  return serializeDocument(a) === serializeDocument(b);
}

function pointProblems(p: Point, meta: Meta, where: string, out: string[]): void {
  if (!Number.isFinite(p.x) || !Number.isFinite(p.y)) {
    out.push(`${where}: coordinates must be finite`);
    return;
  }
  if (p.x < 0 || p.x > meta.width_px || p.y < 0 || p.y > meta.height_px) {
    out.push(`${where}: point (${p.x}, ${p.y}) is outside the image`);
  }
}

/**
 * Mirror of the server-side invariants; returns human-readable problems
 * (empty when the document would be accepted).
 */
export function validateDocument(doc: AnnotationDocument): string[] {
  const problems: string[] = [];
  const meta = doc.meta;
  if (meta.id.length === 0) {
    problems.push("meta.id must not be empty");
  }
  if (meta.width_px <= 0 || meta.height_px <= 0) {
    problems.push("meta: image dimensions must be positive");
  }
  if (doc.horizon !== null) {
    const y = doc.horizon.y_h;
    if (!Number.isFinite(y) || y < 0 || y > meta.height_px) {
      problems.push(`horizon: y = ${y} is outside the image`);
    }
  }
  doc.figures.forEach((fig, i) => {
    const where = `figure ${i + 1}`;
    pointProblems(fig.head, meta, `${where} head`, problems);
    pointProblems(fig.foot, meta, `${where} foot`, problems);
    if (!(fig.foot.y > fig.head.y)) {
      problems.push(`${where}: the foot must be strictly below the head`);
    }
    if (fig.shadow_end !== null) {
      pointProblems(fig.shadow_end, meta, `${where} shadow end`, problems);
      if (fig.shadow_end.x === fig.foot.x && fig.shadow_end.y === fig.foot.y) {
        problems.push(`${where}: the shadow end coincides with the foot`);
      }
    }
  });
  doc.faces.forEach((face, i) => {
    const where = `face ${i + 1}`;
    const [x, y, w, h] = face.bbox;
    if (![x, y, w, h].every(Number.isFinite)) {
      problems.push(`${where}: box must be finite`);
      return;
    }
    if (w <= 0 || h <= 0) {
      problems.push(`${where}: box width and height must be positive`);
    } else if (x < 0 || y < 0 || x + w > meta.width_px || y + h > meta.height_px) {
      problems.push(`${where}: box extends outside the image`);
    }
    const el = face.eyelights;
    if (el === null) return;
    pointProblems(el.left_pupil, meta, `${where} left pupil`, problems);
    pointProblems(el.left_highlight, meta, `${where} left highlight`, problems);
    pointProblems(el.right_pupil, meta, `${where} right pupil`, problems);
    pointProblems(el.right_highlight, meta, `${where} right highlight`, problems);
    if (!(el.left_pupil.x < el.right_pupil.x)) {
      problems.push(`${where}: the left pupil must be left of the right pupil`);
    }
    if (el.left_highlight.x === el.left_pupil.x && el.left_highlight.y === el.left_pupil.y) {
      problems.push(`${where}: left highlight coincides with the pupil`);
    }
    if (
      el.right_highlight.x === el.right_pupil.x &&
      el.right_highlight.y === el.right_pupil.y
    ) {
      problems.push(`${where}: right highlight coincides with the pupil`);
    }
  });
  return problems;
}
