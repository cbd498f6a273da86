"""Corpus layout: an index file naming paintings, images and annotations.

A corpus is a directory with an ``index.json`` listing every painting:

    {
      "version": 1,
      "paintings": [
        {"id": "p001",
         "image_path": "images/p001.png",
         "annotation_path": "annotations/p001.json",
         "year": 1660}
      ]
    }

``image_path`` may be null (synthetic, annotation-only corpora) and
``year`` may be null (undated works).  ``annotation_path`` defaults to
``annotations/<id>.json``; the file may not exist yet for paintings that
have not been annotated.  All paths are relative to the corpus root and
must stay inside it.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .model import (
    AnnotationDocument,
    PaintingMeta,
    load_document,
    save_document,
)

INDEX_NAME = "index.json"
INDEX_VERSION = 1


class CorpusError(Exception):
    """The corpus directory or its index is unusable."""


@dataclass(frozen=True)
class CorpusEntry:
    painting_id: str
    image_path: str | None
    annotation_path: str
    year: int | None


def _check_relative(path: str, where: str) -> str:
    p = Path(path)
    if p.is_absolute() or ".." in p.parts:
        raise CorpusError(f"{where}: path must be relative to the corpus root, got {path!r}")
    return path


@dataclass(frozen=True)
class CorpusIndex:
    """Loaded, validated corpus; entries sorted by painting id."""

    root: Path
    entries: tuple[CorpusEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "root", Path(self.root))
        object.__setattr__(self, "entries", tuple(self.entries))

    def entry(self, painting_id: str) -> CorpusEntry:
        for e in self.entries:
            if e.painting_id == painting_id:
                return e
        raise KeyError(painting_id)

    def annotation_file(self, painting_id: str) -> Path:
        return self.root / self.entry(painting_id).annotation_path

    def image_file(self, painting_id: str) -> Path:
        e = self.entry(painting_id)
        if e.image_path is None:
            raise CorpusError(f"painting {painting_id!r} has no image")
        return self.root / e.image_path

    def has_annotations(self, painting_id: str) -> bool:
        return self.annotation_file(painting_id).exists()

    def load_document(self, painting_id: str) -> AnnotationDocument:
        path = self.annotation_file(painting_id)
        if not path.exists():
            raise CorpusError(f"painting {painting_id!r} has no annotations yet")
        return load_document(path)

    def try_load_document(self, painting_id: str) -> AnnotationDocument | None:
        if not self.has_annotations(painting_id):
            return None
        return self.load_document(painting_id)

    def save_document(self, doc: AnnotationDocument) -> None:
        path = self.annotation_file(doc.meta.id)
        path.parent.mkdir(parents=True, exist_ok=True)
        save_document(doc, path)

    def load_image(self, painting_id: str):
        from PIL import Image

        return Image.open(self.image_file(painting_id))

    def image_size(self, painting_id: str) -> tuple[int, int]:
        with self.load_image(painting_id) as im:
            return im.size

    def fresh_document(self, painting_id: str) -> AnnotationDocument:
        """Empty document for a painting not yet annotated.

        Image dimensions come from the image file; image-less entries
        cannot produce one (their annotations are generated, not drawn).
        """
        e = self.entry(painting_id)
        w, h = self.image_size(painting_id)
        return AnnotationDocument(
            meta=PaintingMeta(
                id=e.painting_id,
                title=e.painting_id,
                year=e.year,
                width_px=w,
                height_px=h,
                image_path=e.image_path or "",
            )
        )

    def iter_documents(self) -> Iterator[tuple[CorpusEntry, AnnotationDocument]]:
        """Yield (entry, document) for every annotated painting, id order."""
        for e in self.entries:
            doc = self.try_load_document(e.painting_id)
            if doc is not None:
                yield e, doc


def _entry_from_json(value, where: str) -> CorpusEntry:
    if not isinstance(value, dict):
        raise CorpusError(f"{where}: expected object")
    allowed = {"id", "image_path", "annotation_path", "year"}
    unknown = value.keys() - allowed
    if unknown:
        raise CorpusError(f"{where}: unknown field(s) {sorted(unknown)}")
    if "id" not in value or not isinstance(value["id"], str) or not value["id"]:
        raise CorpusError(f"{where}: 'id' must be a non-empty string")
    pid = value["id"]
    image_path = value.get("image_path")
    if image_path is not None:
        if not isinstance(image_path, str):
            raise CorpusError(f"{where}.image_path: expected string or null")
        _check_relative(image_path, f"{where}.image_path")
    annotation_path = value.get("annotation_path", f"annotations/{pid}.json")
    if not isinstance(annotation_path, str):
        raise CorpusError(f"{where}.annotation_path: expected string")
    _check_relative(annotation_path, f"{where}.annotation_path")
    year = value.get("year")
    if year is not None and (isinstance(year, bool) or not isinstance(year, int)):
        raise CorpusError(f"{where}.year: expected integer or null")
    return CorpusEntry(
        painting_id=pid,
        image_path=image_path,
        annotation_path=annotation_path,
        year=year,
    )


def load_corpus(root: str | os.PathLike) -> CorpusIndex:
    """Load and validate ``<root>/index.json``.

    Checks: unique painting ids, relative paths, and existence of every
    referenced image file.  Annotation files may be absent (not yet
    annotated).
    """
    root = Path(root)
    index_path = root / INDEX_NAME
    if not index_path.exists():
        raise CorpusError(f"no corpus index at {index_path}")
    try:
        data = json.loads(index_path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorpusError(f"unreadable corpus index {index_path}: {e}") from None
    if not isinstance(data, dict):
        raise CorpusError("corpus index must be a JSON object")
    unknown = data.keys() - {"version", "paintings"}
    if unknown:
        raise CorpusError(f"corpus index: unknown field(s) {sorted(unknown)}")
    if data.get("version") != INDEX_VERSION:
        raise CorpusError(f"corpus index: unsupported version {data.get('version')!r}")
    paintings = data.get("paintings")
    if not isinstance(paintings, list):
        raise CorpusError("corpus index: 'paintings' must be an array")
    entries = [
        _entry_from_json(p, f"paintings[{i}]") for i, p in enumerate(paintings)
    ]
    seen: set[str] = set()
    for e in entries:
        if e.painting_id in seen:
            raise CorpusError(f"duplicate painting id {e.painting_id!r}")
        seen.add(e.painting_id)
    for e in entries:
        if e.image_path is not None and not (root / e.image_path).exists():
            raise CorpusError(
                f"painting {e.painting_id!r}: image file {e.image_path!r} missing"
            )
    entries.sort(key=lambda e: e.painting_id)
    return CorpusIndex(root=root, entries=tuple(entries))


def write_index(root: str | os.PathLike, entries: list[CorpusEntry] | tuple[CorpusEntry, ...]) -> None:
    """Write ``<root>/index.json`` (canonical form, atomic)."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": INDEX_VERSION,
        "paintings": [
            {
                "id": e.painting_id,
                "image_path": e.image_path,
                "annotation_path": e.annotation_path,
                "year": e.year,
            }
            for e in entries
        ],
    }
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    tmp = root / (INDEX_NAME + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, root / INDEX_NAME)
