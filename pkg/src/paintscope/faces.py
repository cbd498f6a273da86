"""Pose/gaze statistics over time and averaged-image composites.

Averaging happens in linear intensity: inputs are sRGB-decoded before the
per-pixel mean and re-encoded on output, so composites keep their overall
brightness.  Accumulation is Kahan-compensated, making the result
order-invariant well below visible precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import PreconditionError
from .model import LATERAL_CATEGORIES, AnnotationDocument, PoseGaze

DEFAULT_FACE_TARGET = (128, 128)
DEFAULT_PAINTING_TARGET = (256, 256)


@dataclass(frozen=True)
class CategoryTimeTable:
    """Per-period proportions of the five lateral pose/gaze classes.

    Proportions in each bin sum to 1 over the non-Other classes; faces in
    the catch-all class only contribute to other_rate.
    """

    bins: tuple[tuple[int, int], ...]
    proportions: tuple[dict[PoseGaze, float], ...]
    counts: tuple[int, ...]
    other_rate: float


def category_time_table(
    docs: Iterable[AnnotationDocument], bin_years: int = 25
) -> CategoryTimeTable:
    """Tally face categories of dated paintings into year bins."""
    if bin_years <= 0:
        raise ValueError(f"bin_years must be positive, got {bin_years}")
    per_bin: dict[int, dict[PoseGaze, int]] = {}
    n_faces = 0
    n_other = 0
    for doc in docs:
        year = doc.meta.year
        for face in doc.faces:
            n_faces += 1
            if face.category is PoseGaze.OTHER:
                n_other += 1  # counted in the rate even when undated
                continue
            if year is None:
                continue
            start = (year // bin_years) * bin_years
            counts = per_bin.setdefault(start, {c: 0 for c in LATERAL_CATEGORIES})
            counts[face.category] += 1
    if not per_bin:
        raise PreconditionError("no dated, categorized faces in corpus")
    bins = []
    proportions = []
    bin_counts = []
    for start in sorted(per_bin):
        counts = per_bin[start]
        total = sum(counts.values())
        if total == 0:
            continue
        bins.append((start, start + bin_years))
        proportions.append({c: counts[c] / total for c in LATERAL_CATEGORIES})
        bin_counts.append(total)
    return CategoryTimeTable(
        bins=tuple(bins),
        proportions=tuple(proportions),
        counts=tuple(bin_counts),
        other_rate=n_other / n_faces,
    )


# --- image averaging --------------------------------------------------------


def srgb_decode(encoded: np.ndarray) -> np.ndarray:
    """sRGB [0,1] to linear [0,1]."""
    encoded = np.asarray(encoded, dtype=np.float64)
    return np.where(
        encoded <= 0.04045,
        encoded / 12.92,
        ((encoded + 0.055) / 1.055) ** 2.4,
    )


def srgb_encode(linear: np.ndarray) -> np.ndarray:
    """Linear [0,1] back to sRGB [0,1]."""
    linear = np.clip(np.asarray(linear, dtype=np.float64), 0.0, 1.0)
    return np.where(
        linear <= 0.0031308,
        linear * 12.92,
        1.055 * linear ** (1.0 / 2.4) - 0.055,
    )


def _as_rgb01(image) -> np.ndarray:
    """Accept a PIL image or array; return HxWx3 float64 sRGB in [0,1]."""
    if hasattr(image, "convert"):  # PIL image, avoid hard import dependency
        image = np.asarray(image.convert("RGB"))
    arr = np.asarray(image)
    if arr.ndim == 2:
        arr = np.stack([arr] * 3, axis=-1)
    if arr.ndim != 3 or arr.shape[2] < 3:
        raise ValueError(f"expected HxWx3 image data, got shape {arr.shape}")
    arr = arr[:, :, :3]
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0
    arr = arr.astype(np.float64)
    if arr.size and arr.max() > 1.0:
        arr = arr / 255.0
    return np.clip(arr, 0.0, 1.0)


def resample_bilinear(image: np.ndarray, target: tuple[int, int]) -> np.ndarray:
    """Stretch an HxWxC array to (w, h) by bilinear interpolation.

    Pixel centres align at half-integer offsets (the usual image-resize
    convention); source samples clamp at the border.
    """
    tw, th = target
    if tw <= 0 or th <= 0:
        raise ValueError(f"target dimensions must be positive, got {target}")
    src = np.asarray(image, dtype=np.float64)
    sh, sw = src.shape[:2]
    xs = (np.arange(tw) + 0.5) * (sw / tw) - 0.5
    ys = (np.arange(th) + 0.5) * (sh / th) - 0.5
    xs = np.clip(xs, 0.0, sw - 1.0)
    ys = np.clip(ys, 0.0, sh - 1.0)
    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    x1 = np.minimum(x0 + 1, sw - 1)
    y1 = np.minimum(y0 + 1, sh - 1)
    fx = (xs - x0)[np.newaxis, :, np.newaxis]
    fy = (ys - y0)[:, np.newaxis, np.newaxis]
    top = src[y0][:, x0] * (1.0 - fx) + src[y0][:, x1] * fx
    bottom = src[y1][:, x0] * (1.0 - fx) + src[y1][:, x1] * fx
    return top * (1.0 - fy) + bottom * fy


@dataclass(frozen=True)
class AverageImage:
    """Mean linear-intensity image over a selection."""

    width: int
    height: int
    pixels: np.ndarray  # height x width x 3 float64, linear [0,1]
    n_images: int

    def to_srgb_u8(self) -> np.ndarray:
        """8-bit sRGB rendering of the composite."""
        return np.round(srgb_encode(self.pixels) * 255.0).astype(np.uint8)

    def save_png(self, path) -> None:
        from PIL import Image

        Image.fromarray(self.to_srgb_u8(), mode="RGB").save(path, format="PNG")


def average_images(images: Iterable, target: tuple[int, int]) -> AverageImage:
    """Per-pixel mean of images stretched to a common size.

    Each input is resampled to ``target`` (aspect ignored), sRGB-decoded to
    linear intensity, and accumulated with Kahan compensation so any input
    order gives the same composite to well under 1e-9.  ``images`` may be
    a lazy iterable; only one decoded image is held at a time.
    """
    tw, th = target
    if tw <= 0 or th <= 0:
        raise ValueError(f"target dimensions must be positive, got {target}")
    n = 0
    acc = np.zeros((th, tw, 3), dtype=np.float64)
    comp = np.zeros_like(acc)
    for image in images:
        rgb = _as_rgb01(image)
        linear = srgb_decode(resample_bilinear(rgb, target))
        # Kahan step
        y = linear - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
        n += 1
    if n == 0:
        raise PreconditionError("no images to average")
    return AverageImage(width=tw, height=th, pixels=acc / n, n_images=n)


def crop_bbox(image: np.ndarray, bbox: tuple[float, float, float, float]) -> np.ndarray:
    """Integer-pixel crop of a face box (rounded to nearest pixel)."""
    x, y, w, h = bbox
    x0, y0 = int(round(x)), int(round(y))
    x1, y1 = x0 + max(1, int(round(w))), y0 + max(1, int(round(h)))
    ih, iw = image.shape[:2]
    x0, y0 = max(0, x0), max(0, y0)
    x1, y1 = min(iw, x1), min(ih, y1)
    return image[y0:y1, x0:x1]


def average_faces_by_category(
    corpus,
    categories: set[PoseGaze],
    target: tuple[int, int] = DEFAULT_FACE_TARGET,
) -> AverageImage:
    """Composite of all face crops whose category is in the selection.

    ``corpus`` must provide iter_documents() and load_image(painting_id);
    see paintscope.corpus.CorpusIndex.
    """

    def crops():
        for entry, doc in corpus.iter_documents():
            selected = [f for f in doc.faces if f.category in categories]
            if not selected:
                continue
            with corpus.load_image(entry.painting_id) as im:
                image = _as_rgb01(im)
            for face in selected:
                yield crop_bbox(image, face.bbox)

    try:
        return average_images(crops(), target)
    except PreconditionError:
        raise PreconditionError(
            f"no faces with category in {sorted(c.value for c in categories)}"
        ) from None


def composite_rms_difference(a: AverageImage, b: AverageImage) -> float:
    """Pixelwise RMS difference between two composites (linear space)."""
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError("composites must share dimensions")
    return float(np.sqrt(np.mean((a.pixels - b.pixels) ** 2)))
