"""Seeded generators shared across the test modules.

random_document builds arbitrary valid annotation documents; mutate_document
damages a valid document in a way whose expected failure class is known, so
rejection tests can assert the *right* error is raised, not just any error.
"""

from __future__ import annotations

import json
import random

from paintscope.corpus import CorpusEntry, write_index
from paintscope.model import (
    AnnotationDocument,
    DocumentInvariantError,
    DocumentParseError,
    DocumentSchemaError,
    EyelightPair,
    FaceAnnotation,
    FigureAnnotation,
    HorizonAnnotation,
    PaintingMeta,
    PoseGaze,
    Point,
    document_to_bytes,
    save_document,
)


def random_point(rng: random.Random, w: int, h: int) -> Point:
    return Point(rng.uniform(0, w), rng.uniform(0, h))


def random_figure(rng: random.Random, w: int, h: int) -> FigureAnnotation:
    head_y = rng.uniform(0, h - 2)
    foot_y = rng.uniform(head_y + 1, h)
    head = Point(rng.uniform(0, w), head_y)
    foot = Point(rng.uniform(0, w), foot_y)
    shadow_end = None
    if rng.random() < 0.6:
        while True:
            shadow_end = random_point(rng, w, h)
            if shadow_end != foot:
                break
    return FigureAnnotation(head=head, foot=foot, shadow_end=shadow_end)


def random_eyelights(rng: random.Random, w: int, h: int) -> EyelightPair:
    lx = rng.uniform(0, w / 2 - 1)
    rx = rng.uniform(lx + 1, w)
    ly = rng.uniform(0, h)
    ry = rng.uniform(0, h)

    def offset_point(px: float, py: float) -> Point:
        while True:
            q = Point(
                min(max(px + rng.uniform(-10, 10), 0), w),
                min(max(py + rng.uniform(-10, 10), 0), h),
            )
            if (q.x, q.y) != (px, py):
                return q

    return EyelightPair(
        left_pupil=Point(lx, ly),
        left_highlight=offset_point(lx, ly),
        right_pupil=Point(rx, ry),
        right_highlight=offset_point(rx, ry),
    )


def random_face(rng: random.Random, w: int, h: int) -> FaceAnnotation:
    bw = rng.uniform(1, w / 2)
    bh = rng.uniform(1, h / 2)
    x = rng.uniform(0, w - bw)
    y = rng.uniform(0, h - bh)
    eyelights = random_eyelights(rng, w, h) if rng.random() < 0.5 else None
    return FaceAnnotation(
        bbox=(x, y, bw, bh),
        category=rng.choice(list(PoseGaze)),
        eyelights=eyelights,
    )


def random_document(rng: random.Random, painting_id: str | None = None) -> AnnotationDocument:
    w = rng.randint(50, 2000)
    h = rng.randint(50, 2000)
    if painting_id is None:
        painting_id = f"p{rng.randint(0, 10**6)}"
    return AnnotationDocument(
        meta=PaintingMeta(
            id=painting_id,
            title=rng.choice(["untitled", "study", "view of a town", "portrait"]),
            year=rng.choice([None, rng.randint(1400, 1900)]),
            width_px=w,
            height_px=h,
            image_path=rng.choice(["", f"images/{painting_id}.png"]),
        ),
        horizon=HorizonAnnotation(rng.uniform(0, h)) if rng.random() < 0.8 else None,
        figures=tuple(random_figure(rng, w, h) for _ in range(rng.randint(0, 6))),
        faces=tuple(random_face(rng, w, h) for _ in range(rng.randint(0, 4))),
    )


# --- classified mutations ----------------------------------------------------


def _parse_mutations(raw: bytes, rng: random.Random):
    yield raw[: rng.randint(1, len(raw) - 2)]  # truncation unbalances braces
    yield b"}junk" + raw
    yield raw[:10] + b"\xff\xfe" + raw[10:]  # invalid UTF-8


def _schema_mutations(data: dict):
    d = json.loads(json.dumps(data))
    d["surprise"] = 1
    yield d

    d = json.loads(json.dumps(data))
    del d["meta"]["title"]
    yield d

    d = json.loads(json.dumps(data))
    d["meta"]["id"] = 7
    yield d

    d = json.loads(json.dumps(data))
    d["version"] = 99
    yield d

    d = json.loads(json.dumps(data))
    d["figures"] = {}
    yield d

    d = json.loads(json.dumps(data))
    d["meta"]["width_px"] = True  # bool is not an acceptable integer
    yield d

    if data["figures"]:
        d = json.loads(json.dumps(data))
        d["figures"][0]["head"]["x"] = "left"
        yield d
        d = json.loads(json.dumps(data))
        d["figures"][0]["head"]["z"] = 1.0
        yield d
    if data["faces"]:
        d = json.loads(json.dumps(data))
        d["faces"][0]["category"] = "XX"
        yield d
        d = json.loads(json.dumps(data))
        d["faces"][0]["bbox"] = [1, 2, 3]
        yield d


def _invariant_mutations(data: dict):
    d = json.loads(json.dumps(data))
    d["meta"]["width_px"] = -4
    yield d

    d = json.loads(json.dumps(data))
    d["meta"]["id"] = ""
    yield d

    if data["horizon"] is not None:
        d = json.loads(json.dumps(data))
        d["horizon"]["y_h"] = d["meta"]["height_px"] + 100
        yield d

    if data["figures"]:
        d = json.loads(json.dumps(data))
        fig = d["figures"][0]
        fig["foot"]["y"] = fig["head"]["y"] - 1
        yield d

        d = json.loads(json.dumps(data))
        d["figures"][0]["head"]["x"] = d["meta"]["width_px"] + 50
        yield d

        d = json.loads(json.dumps(data))
        fig = d["figures"][0]
        fig["shadow_end"] = dict(fig["foot"])
        yield d

    if data["faces"]:
        d = json.loads(json.dumps(data))
        d["faces"][0]["bbox"][2] = 0
        yield d

        d = json.loads(json.dumps(data))
        bbox = d["faces"][0]["bbox"]
        bbox[0] = d["meta"]["width_px"] - bbox[2] + 10
        yield d

    for i, face in enumerate(data["faces"]):
        if face["eyelights"] is not None:
            d = json.loads(json.dumps(data))
            el = d["faces"][i]["eyelights"]
            el["left_pupil"], el["right_pupil"] = el["right_pupil"], el["left_pupil"]
            yield d

            d = json.loads(json.dumps(data))
            el = d["faces"][i]["eyelights"]
            el["left_highlight"] = dict(el["left_pupil"])
            yield d
            break


def mutate_document(doc: AnnotationDocument, rng: random.Random) -> tuple[bytes, type]:
    """Return (damaged bytes, expected DocumentError subclass)."""
    raw = document_to_bytes(doc)
    data = json.loads(raw)
    kind = rng.choice(["parse", "schema", "invariant"])
    if kind == "parse":
        options = list(_parse_mutations(raw, rng))
        return rng.choice(options), DocumentParseError
    if kind == "schema":
        options = list(_schema_mutations(data))
        mutated = rng.choice(options)
        return json.dumps(mutated).encode("utf-8"), DocumentSchemaError
    options = list(_invariant_mutations(data))
    mutated = rng.choice(options)
    return json.dumps(mutated).encode("utf-8"), DocumentInvariantError


# --- corpus building ---------------------------------------------------------


def make_doc(
    painting_id: str = "p1",
    width: int = 1000,
    height: int = 1000,
    year: int | None = None,
    horizon: float | None = None,
    figures=(),
    faces=(),
) -> AnnotationDocument:
    """Document with explicit geometry; everything else neutral defaults."""
    return AnnotationDocument(
        meta=PaintingMeta(
            id=painting_id,
            title="test",
            year=year,
            width_px=width,
            height_px=height,
            image_path="",
        ),
        horizon=HorizonAnnotation(horizon) if horizon is not None else None,
        figures=tuple(figures),
        faces=tuple(faces),
    )


def build_image_corpus(root, specs):
    """Write PNGs + documents + index; specs = [(pid, year, u8 array, faces)].

    Returns the corpus root (load with paintscope.corpus.load_corpus).
    """
    from PIL import Image

    root.mkdir(parents=True, exist_ok=True)
    (root / "images").mkdir(exist_ok=True)
    docs = []
    image_paths = {}
    for pid, year, arr, face_list in specs:
        h, w = arr.shape[:2]
        rel = f"images/{pid}.png"
        Image.fromarray(arr, mode="RGB").save(root / rel)
        image_paths[pid] = rel
        docs.append(
            make_doc(painting_id=pid, year=year, width=w, height=h, faces=face_list)
        )
    return build_corpus(root, docs, image_paths=image_paths)


def build_corpus(root, docs, image_paths=None):
    """Write documents + index under ``root``; returns the root."""
    root.mkdir(parents=True, exist_ok=True)
    (root / "annotations").mkdir(exist_ok=True)
    entries = []
    for doc in docs:
        pid = doc.meta.id
        save_document(doc, root / "annotations" / f"{pid}.json")
        entries.append(
            CorpusEntry(
                painting_id=pid,
                image_path=(image_paths or {}).get(pid),
                annotation_path=f"annotations/{pid}.json",
                year=doc.meta.year,
            )
        )
    write_index(root, entries)
    return root
