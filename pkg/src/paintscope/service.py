"""HTTP service: corpus browsing, annotation persistence, on-demand analyses.

The service is a thin layer over the corpus directory.  Annotation PUTs are
validated with the same three-way error classes as file loading and written
atomically, serialized per painting id; GETs of a stored document return
the canonical bytes unchanged.  Analyses run through the same report
builders as the command line, so both paths emit identical CSV.
"""

from __future__ import annotations

import mimetypes
import tempfile
import threading
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Request, Response
from fastapi.responses import FileResponse, HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import reports
from .corpus import CorpusError, CorpusIndex
from .errors import AnalysisError, ZeroAnalyzableError
from .eyelights import tilt_angle
from .model import (
    DocumentError,
    Point,
    document_from_bytes,
    document_to_bytes,
)

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>paintscope</title></head>
<body style="font-family: sans-serif; max-width: 40em; margin: 4em auto;">
<h1>paintscope service</h1>
<p>The annotation UI bundle is not installed. Start the server with
<code>--ui &lt;dir&gt;</code> pointing at the built frontend, or use the
API directly under <code>/api/</code>.</p>
</body></html>
"""


class _PointBody(BaseModel):
    x: float
    y: float


class _TiltPreviewBody(BaseModel):
    pupil: _PointBody
    highlight: _PointBody


def _media_type(path: Path) -> str:
    guessed, _ = mimetypes.guess_type(path.name)
    return guessed or "application/octet-stream"


def create_app(corpus: CorpusIndex, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="paintscope", docs_url=None, redoc_url=None)
    write_locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def lock_for(painting_id: str) -> threading.Lock:
        with locks_guard:
            lock = write_locks.get(painting_id)
            if lock is None:
                lock = write_locks[painting_id] = threading.Lock()
            return lock

    def entry_or_404(painting_id: str):
        try:
            return corpus.entry(painting_id)
        except KeyError:
            raise HTTPException(404, f"unknown painting {painting_id!r}") from None

    @app.get("/api/paintings")
    def list_paintings():
        return {
            "paintings": [
                {
                    "id": e.painting_id,
                    "year": e.year,
                    "has_image": e.image_path is not None,
                    "annotated": corpus.has_annotations(e.painting_id),
                }
                for e in corpus.entries
            ]
        }

    @app.get("/api/paintings/{painting_id}/image")
    def get_image(painting_id: str):
        entry = entry_or_404(painting_id)
        if entry.image_path is None:
            raise HTTPException(404, f"painting {painting_id!r} has no image")
        path = corpus.image_file(painting_id)
        if not path.exists():
            raise HTTPException(404, f"image file for {painting_id!r} missing")
        return FileResponse(path, media_type=_media_type(path))

    @app.get("/api/paintings/{painting_id}/annotations")
    def get_annotations(painting_id: str):
        entry_or_404(painting_id)
        try:
            doc = corpus.try_load_document(painting_id)
            if doc is None:
                doc = corpus.fresh_document(painting_id)
        except DocumentError as e:
            raise HTTPException(
                500, {"error": type(e).__name__, "message": str(e)}
            ) from None
        except CorpusError as e:
            raise HTTPException(404, str(e)) from None
        return Response(content=document_to_bytes(doc), media_type="application/json")

    @app.put("/api/paintings/{painting_id}/annotations")
    async def put_annotations(painting_id: str, request: Request):
        entry_or_404(painting_id)
        raw = await request.body()
        try:
            doc = document_from_bytes(raw)
        except DocumentError as e:
            raise HTTPException(
                422, {"error": type(e).__name__, "message": str(e)}
            ) from None
        if doc.meta.id != painting_id:
            raise HTTPException(
                422,
                {
                    "error": "DocumentInvariantError",
                    "message": f"document id {doc.meta.id!r} does not match "
                    f"painting {painting_id!r}",
                },
            )
        with lock_for(painting_id):
            corpus.save_document(doc)
        return Response(content=document_to_bytes(doc), media_type="application/json")

    @app.post("/api/analyze/tilt")
    def analyze_tilt(body: _TiltPreviewBody):
        try:
            tilt = tilt_angle(
                Point(body.pupil.x, body.pupil.y),
                Point(body.highlight.x, body.highlight.y),
            )
        except ValueError as e:
            raise HTTPException(422, str(e)) from None
        return {"tilt_deg": tilt}

    @app.post("/api/analyze/{kind}")
    def analyze(kind: str, options: dict | None = Body(default=None)):
        if kind not in reports.ANALYSIS_KINDS:
            raise HTTPException(
                404, f"unknown analysis kind {kind!r}; choose from {reports.ANALYSIS_KINDS}"
            )
        options = dict(options or {})
        try:
            kwargs = _analysis_kwargs(kind, options)
        except ValueError as e:
            raise HTTPException(422, str(e)) from None
        cleanup = kwargs.pop("_tmp_external", None)
        try:
            report = reports.run_analysis(kind, corpus, **kwargs)
        except ZeroAnalyzableError as e:
            return JSONResponse(
                status_code=422,
                content={
                    "error": "ZeroAnalyzableError",
                    "message": str(e),
                    "warnings": list(e.warnings),
                },
            )
        except (AnalysisError, ValueError) as e:
            raise HTTPException(422, str(e)) from None
        finally:
            if cleanup is not None:
                cleanup.close()
        return {
            "csv": report.csv_text,
            "warnings": list(report.warnings),
            "info": list(report.info),
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return HTMLResponse(_FALLBACK_PAGE)

    return app


_ANALYZE_OPTION_KEYS = {
    "perspective": {"human_length_m"},
    "shadows": {"focal_px", "deviations"},
    "eyelights": {"table", "bin_width_deg", "bin_years", "external_csv_text"},
    "categories": {"bin_years"},
}


def _analysis_kwargs(kind: str, options: dict) -> dict:
    """Translate a request's options object into run_analysis kwargs."""
    allowed = _ANALYZE_OPTION_KEYS[kind]
    unknown = options.keys() - allowed
    if unknown:
        raise ValueError(
            f"unknown option(s) for {kind}: {sorted(unknown)}; allowed: {sorted(allowed)}"
        )
    kwargs = dict(options)
    external_text = kwargs.pop("external_csv_text", None)
    if external_text is not None:
        if not isinstance(external_text, str):
            raise ValueError("external_csv_text must be a string")
        tmp = tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", suffix=".csv", delete=False
        )
        tmp.write(external_text)
        tmp.close()
        kwargs["external_csv"] = tmp.name
        kwargs["_tmp_external"] = _TempCleanup(tmp.name)
    return kwargs


class _TempCleanup:
    def __init__(self, path: str):
        self.path = path

    def close(self):
        try:
            Path(self.path).unlink()
        except OSError:
            pass
