/**
 * Typed client for the annotation service. The UI talks to nothing else:
 * no direct file access, no side channels — every read and write goes
 * through these endpoints.
 */

import type { AnnotationDocument, Point } from "./document.js";
import { parseDocument, serializeDocument } from "./document.js";

export interface PaintingListing {
  id: string;
  year: number | null;
  has_image: boolean;
  annotated: boolean;
}

export type AnalysisKind = "perspective" | "shadows" | "eyelights" | "categories";

export interface AnalysisResult {
  csv: string;
  warnings: string[];
  info: string[];
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly errorClass: string | null = null,
  ) {
    super(message);
  }
}

async function raiseFor(resp: Response): Promise<never> {
  let message = `${resp.status} ${resp.statusText}`;
  let errorClass: string | null = null;
  try {
    const body = await resp.json();
    const detail = body.detail ?? body;
    if (typeof detail === "string") {
      message = detail;
    } else if (detail && typeof detail.message === "string") {
      message = detail.message;
      errorClass = typeof detail.error === "string" ? detail.error : null;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(message, resp.status, errorClass);
}

export class Client {
  constructor(private readonly base = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async listPaintings(): Promise<PaintingListing[]> {
    const resp = await fetch(this.url("/api/paintings"));
    if (!resp.ok) await raiseFor(resp);
    return (await resp.json()).paintings as PaintingListing[];
  }

  imageUrl(id: string): string {
    return this.url(`/api/paintings/${encodeURIComponent(id)}/image`);
  }

  async fetchAnnotations(id: string): Promise<AnnotationDocument> {
    const resp = await fetch(
      this.url(`/api/paintings/${encodeURIComponent(id)}/annotations`),
    );
    if (!resp.ok) await raiseFor(resp);
    return parseDocument(await resp.text());
  }

  /** PUT the document; resolves to the server's canonical echo. */
  async saveAnnotations(
    id: string,
    doc: AnnotationDocument,
  ): Promise<AnnotationDocument> {
    const resp = await fetch(
      this.url(`/api/paintings/${encodeURIComponent(id)}/annotations`),
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: serializeDocument(doc),
      },
    );
    if (!resp.ok) await raiseFor(resp);
    return parseDocument(await resp.text());
  }

  async analyze(
    kind: AnalysisKind,
    options: Record<string, unknown> = {},
  ): Promise<AnalysisResult> {
    const resp = await fetch(this.url(`/api/analyze/${kind}`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
    if (!resp.ok) await raiseFor(resp);
    return (await resp.json()) as AnalysisResult;
  }

  /** Server-side tilt of one pupil→highlight pair (the live preview). */
  async tiltPreview(pupil: Point, highlight: Point): Promise<number> {
    const resp = await fetch(this.url("/api/analyze/tilt"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pupil, highlight }),
    });
    if (!resp.ok) await raiseFor(resp);
    return (await resp.json()).tilt_deg as number;
  }
}
