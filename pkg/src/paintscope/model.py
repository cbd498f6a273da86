"""Domain types for painting annotations and their on-disk JSON format.

A painting's annotations (horizon line, figure segments, face boxes with
pose/gaze labels and pupil/highlight marks) live in one JSON file per
painting.  Serialization is canonical: a byte stream either loads to exactly
one document or fails with exactly one of three error classes (parse,
schema, invariant), and ``save`` of a loaded document reproduces the bytes.

Coordinates are pixels, origin top-left, x rightward, y downward.  All
coordinates are stored as floats (annotators place sub-pixel marks on
zoomed images).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

SCHEMA_VERSION = 1


class DocumentError(Exception):
    """Base class for annotation-document load/save failures."""


class DocumentParseError(DocumentError):
    """The byte stream is not well-formed JSON (or not UTF-8)."""


class DocumentSchemaError(DocumentError):
    """JSON is well-formed but does not match the document schema."""


class DocumentInvariantError(DocumentError):
    """Schema-valid document violating a semantic invariant."""


class PoseGaze(Enum):
    """Joint head-pose / gaze-direction label, plus a catch-all.

    Wire values are the two-letter codes stored in annotation files.
    """

    LEFT_FACING_LEFT_GAZING = "LL"
    LEFT_FACING_FRONT_GAZING = "LF"
    FRONT_FACING_FRONT_GAZING = "FF"
    RIGHT_FACING_FRONT_GAZING = "RF"
    RIGHT_FACING_RIGHT_GAZING = "RR"
    OTHER = "OTHER"


#: The five laterally-informative categories (everything but OTHER), in
#: canonical left-to-right order. Report columns follow this order.
LATERAL_CATEGORIES: tuple[PoseGaze, ...] = (
    PoseGaze.LEFT_FACING_LEFT_GAZING,
    PoseGaze.LEFT_FACING_FRONT_GAZING,
    PoseGaze.FRONT_FACING_FRONT_GAZING,
    PoseGaze.RIGHT_FACING_FRONT_GAZING,
    PoseGaze.RIGHT_FACING_RIGHT_GAZING,
)


@dataclass(frozen=True)
class Point:
    """Pixel position; finite reals."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))


@dataclass(frozen=True)
class PaintingMeta:
    id: str
    title: str
    year: int | None
    width_px: int
    height_px: int
    image_path: str


@dataclass(frozen=True)
class HorizonAnnotation:
    """Horizontal line y = y_h marking the level of the eye point."""

    y_h: float

    def __post_init__(self):
        object.__setattr__(self, "y_h", float(self.y_h))


@dataclass(frozen=True)
class FigureAnnotation:
    """Head-to-foot segment, optionally extended foot-to-shadow-end."""

    head: Point
    foot: Point
    shadow_end: Point | None = None


@dataclass(frozen=True)
class EyelightPair:
    """Pupil and highlight centres for both eyes of one face.

    "left"/"right" are the viewer's frame: the left eye is the one with
    the smaller x coordinate.
    """

    left_pupil: Point
    left_highlight: Point
    right_pupil: Point
    right_highlight: Point


@dataclass(frozen=True)
class FaceAnnotation:
    """Externally-detected face box with its labels.

    bbox is (x, y, w, h) in pixels; detection is ingested, never computed
    here.
    """

    bbox: tuple[float, float, float, float]
    category: PoseGaze
    eyelights: EyelightPair | None = None

    def __post_init__(self):
        object.__setattr__(self, "bbox", tuple(float(v) for v in self.bbox))


@dataclass(frozen=True)
class AnnotationDocument:
    """All annotations for one painting. Immutable after construction."""

    meta: PaintingMeta
    horizon: HorizonAnnotation | None = None
    figures: tuple[FigureAnnotation, ...] = ()
    faces: tuple[FaceAnnotation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "figures", tuple(self.figures))
        object.__setattr__(self, "faces", tuple(self.faces))


def _check_point_finite(p: Point, where: str) -> None:
    if not (math.isfinite(p.x) and math.isfinite(p.y)):
        raise DocumentInvariantError(f"{where}: coordinates must be finite")


def _check_point_bounds(p: Point, meta: PaintingMeta, where: str) -> None:
    _check_point_finite(p, where)
    if not (0.0 <= p.x <= meta.width_px and 0.0 <= p.y <= meta.height_px):
        raise DocumentInvariantError(
            f"{where}: point ({p.x}, {p.y}) outside image bounds "
            f"[0, {meta.width_px}] x [0, {meta.height_px}]"
        )


def validate_document(doc: AnnotationDocument) -> None:
    """Check every document invariant; raise DocumentInvariantError on the
    first violation, naming the offending annotation.
    """
    meta = doc.meta
    if not isinstance(meta.id, str) or not meta.id:
        raise DocumentInvariantError("meta.id must be a non-empty string")
    if meta.width_px <= 0 or meta.height_px <= 0:
        raise DocumentInvariantError(
            f"meta: width_px and height_px must be positive, "
            f"got {meta.width_px} x {meta.height_px}"
        )

    if doc.horizon is not None:
        y = doc.horizon.y_h
        if not math.isfinite(y) or not (0.0 <= y <= meta.height_px):
            raise DocumentInvariantError(
                f"horizon: y_h = {y} outside [0, {meta.height_px}]"
            )

    for i, fig in enumerate(doc.figures):
        _check_point_bounds(fig.head, meta, f"figures[{i}].head")
        _check_point_bounds(fig.foot, meta, f"figures[{i}].foot")
        if not fig.foot.y > fig.head.y:
            raise DocumentInvariantError(
                f"figures[{i}]: foot.y ({fig.foot.y}) must be strictly below "
                f"head.y ({fig.head.y})"
            )
        if fig.shadow_end is not None:
            _check_point_bounds(fig.shadow_end, meta, f"figures[{i}].shadow_end")
            if fig.shadow_end == fig.foot:
                raise DocumentInvariantError(
                    f"figures[{i}]: shadow_end coincides with foot"
                )

    for i, face in enumerate(doc.faces):
        x, y, w, h = face.bbox
        if not all(math.isfinite(v) for v in face.bbox):
            raise DocumentInvariantError(f"faces[{i}]: bbox must be finite")
        if w <= 0 or h <= 0:
            raise DocumentInvariantError(
                f"faces[{i}]: bbox width/height must be positive, got {w} x {h}"
            )
        if x < 0 or y < 0 or x + w > meta.width_px or y + h > meta.height_px:
            raise DocumentInvariantError(
                f"faces[{i}]: bbox ({x}, {y}, {w}, {h}) outside image bounds"
            )
        el = face.eyelights
        if el is None:
            continue
        for name, p in (
            ("left_pupil", el.left_pupil),
            ("left_highlight", el.left_highlight),
            ("right_pupil", el.right_pupil),
            ("right_highlight", el.right_highlight),
        ):
            _check_point_bounds(p, meta, f"faces[{i}].eyelights.{name}")
        if not el.left_pupil.x < el.right_pupil.x:
            raise DocumentInvariantError(
                f"faces[{i}].eyelights: left_pupil.x ({el.left_pupil.x}) must "
                f"be smaller than right_pupil.x ({el.right_pupil.x})"
            )
        if el.left_highlight == el.left_pupil:
            raise DocumentInvariantError(
                f"faces[{i}].eyelights: left highlight coincides with pupil"
            )
        if el.right_highlight == el.right_pupil:
            raise DocumentInvariantError(
                f"faces[{i}].eyelights: right highlight coincides with pupil"
            )


# --- JSON schema walk ------------------------------------------------------


def _expect_object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise DocumentSchemaError(f"{where}: expected object, got {type(value).__name__}")
    return value


def _expect_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    missing = required - obj.keys()
    if missing:
        raise DocumentSchemaError(f"{where}: missing field(s) {sorted(missing)}")
    unknown = obj.keys() - allowed
    if unknown:
        raise DocumentSchemaError(f"{where}: unknown field(s) {sorted(unknown)}")


def _expect_number(value, where: str) -> float:
    # bool is an int subclass; never a coordinate
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentSchemaError(f"{where}: expected number, got {type(value).__name__}")
    return float(value)


def _expect_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentSchemaError(f"{where}: expected integer, got {type(value).__name__}")
    return value


def _expect_str(value, where: str) -> str:
    if not isinstance(value, str):
        raise DocumentSchemaError(f"{where}: expected string, got {type(value).__name__}")
    return value


def _point_from_json(value, where: str) -> Point:
    obj = _expect_object(value, where)
    _expect_keys(obj, {"x", "y"}, {"x", "y"}, where)
    return Point(_expect_number(obj["x"], f"{where}.x"), _expect_number(obj["y"], f"{where}.y"))


def _meta_from_json(value) -> PaintingMeta:
    obj = _expect_object(value, "meta")
    fields = {"id", "title", "year", "width_px", "height_px", "image_path"}
    _expect_keys(obj, fields, fields, "meta")
    year = obj["year"]
    if year is not None:
        year = _expect_int(year, "meta.year")
    return PaintingMeta(
        id=_expect_str(obj["id"], "meta.id"),
        title=_expect_str(obj["title"], "meta.title"),
        year=year,
        width_px=_expect_int(obj["width_px"], "meta.width_px"),
        height_px=_expect_int(obj["height_px"], "meta.height_px"),
        image_path=_expect_str(obj["image_path"], "meta.image_path"),
    )


def _figure_from_json(value, where: str) -> FigureAnnotation:
    obj = _expect_object(value, where)
    _expect_keys(obj, {"head", "foot", "shadow_end"}, {"head", "foot", "shadow_end"}, where)
    shadow = obj["shadow_end"]
    return FigureAnnotation(
        head=_point_from_json(obj["head"], f"{where}.head"),
        foot=_point_from_json(obj["foot"], f"{where}.foot"),
        shadow_end=None if shadow is None else _point_from_json(shadow, f"{where}.shadow_end"),
    )


def _eyelights_from_json(value, where: str) -> EyelightPair:
    obj = _expect_object(value, where)
    fields = {"left_pupil", "left_highlight", "right_pupil", "right_highlight"}
    _expect_keys(obj, fields, fields, where)
    return EyelightPair(
        left_pupil=_point_from_json(obj["left_pupil"], f"{where}.left_pupil"),
        left_highlight=_point_from_json(obj["left_highlight"], f"{where}.left_highlight"),
        right_pupil=_point_from_json(obj["right_pupil"], f"{where}.right_pupil"),
        right_highlight=_point_from_json(obj["right_highlight"], f"{where}.right_highlight"),
    )


def _face_from_json(value, where: str) -> FaceAnnotation:
    obj = _expect_object(value, where)
    fields = {"bbox", "category", "eyelights"}
    _expect_keys(obj, fields, fields, where)
    bbox = obj["bbox"]
    if not isinstance(bbox, list) or len(bbox) != 4:
        raise DocumentSchemaError(f"{where}.bbox: expected [x, y, w, h] array")
    bbox_t = tuple(_expect_number(v, f"{where}.bbox[{i}]") for i, v in enumerate(bbox))
    cat = _expect_str(obj["category"], f"{where}.category")
    try:
        category = PoseGaze(cat)
    except ValueError:
        raise DocumentSchemaError(
            f"{where}.category: unknown value {cat!r}; expected one of "
            f"{[c.value for c in PoseGaze]}"
        ) from None
    eyelights = obj["eyelights"]
    return FaceAnnotation(
        bbox=bbox_t,
        category=category,
        eyelights=None if eyelights is None else _eyelights_from_json(eyelights, f"{where}.eyelights"),
    )


def document_from_json(data) -> AnnotationDocument:
    """Build and validate a document from already-parsed JSON data."""
    obj = _expect_object(data, "document")
    fields = {"version", "meta", "horizon", "figures", "faces"}
    _expect_keys(obj, fields, fields, "document")
    version = _expect_int(obj["version"], "version")
    if version != SCHEMA_VERSION:
        raise DocumentSchemaError(f"version: unsupported schema version {version}")
    horizon = obj["horizon"]
    if horizon is not None:
        hobj = _expect_object(horizon, "horizon")
        _expect_keys(hobj, {"y_h"}, {"y_h"}, "horizon")
        horizon = HorizonAnnotation(_expect_number(hobj["y_h"], "horizon.y_h"))
    figures = obj["figures"]
    if not isinstance(figures, list):
        raise DocumentSchemaError("figures: expected array")
    faces = obj["faces"]
    if not isinstance(faces, list):
        raise DocumentSchemaError("faces: expected array")
    doc = AnnotationDocument(
        meta=_meta_from_json(obj["meta"]),
        horizon=horizon,
        figures=tuple(_figure_from_json(f, f"figures[{i}]") for i, f in enumerate(figures)),
        faces=tuple(_face_from_json(f, f"faces[{i}]") for i, f in enumerate(faces)),
    )
    validate_document(doc)
    return doc


# --- canonical serialization ----------------------------------------------


def _point_to_json(p: Point) -> dict:
    return {"x": p.x, "y": p.y}


def document_to_json(doc: AnnotationDocument) -> dict:
    meta = doc.meta
    return {
        "version": SCHEMA_VERSION,
        "meta": {
            "id": meta.id,
            "title": meta.title,
            "year": meta.year,
            "width_px": meta.width_px,
            "height_px": meta.height_px,
            "image_path": meta.image_path,
        },
        "horizon": None if doc.horizon is None else {"y_h": doc.horizon.y_h},
        "figures": [
            {
                "head": _point_to_json(f.head),
                "foot": _point_to_json(f.foot),
                "shadow_end": None if f.shadow_end is None else _point_to_json(f.shadow_end),
            }
            for f in doc.figures
        ],
        "faces": [
            {
                "bbox": list(f.bbox),
                "category": f.category.value,
                "eyelights": None
                if f.eyelights is None
                else {
                    "left_pupil": _point_to_json(f.eyelights.left_pupil),
                    "left_highlight": _point_to_json(f.eyelights.left_highlight),
                    "right_pupil": _point_to_json(f.eyelights.right_pupil),
                    "right_highlight": _point_to_json(f.eyelights.right_highlight),
                },
            }
            for f in doc.faces
        ],
    }


def document_to_bytes(doc: AnnotationDocument) -> bytes:
    """Canonical UTF-8 JSON: sorted keys, two-space indent, trailing newline."""
    validate_document(doc)
    text = json.dumps(document_to_json(doc), ensure_ascii=False, sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def document_from_bytes(raw: bytes) -> AnnotationDocument:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise DocumentParseError(f"not valid UTF-8: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(f"malformed JSON: {e}") from None
    return document_from_json(data)


def save_document(doc: AnnotationDocument, path: str | os.PathLike) -> None:
    """Write the canonical JSON form of ``doc``, atomically.

    The file appears either in its previous state or fully written; a
    temporary sibling plus rename guarantees no partial writes.
    """
    path = Path(path)
    payload = document_to_bytes(doc)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(payload)
    os.replace(tmp, path)


def load_document(path: str | os.PathLike) -> AnnotationDocument:
    """Load and fully validate an annotation document.

    Raises DocumentParseError / DocumentSchemaError / DocumentInvariantError
    depending on what is wrong with the file.
    """
    return document_from_bytes(Path(path).read_bytes())
