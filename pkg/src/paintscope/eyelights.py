"""Light direction from corneal highlights: tilt angles, histograms,
temporal trends, and the interocular perspective test.

The pupil-to-highlight vector is reduced to a tilt angle in the picture
plane: 0 degrees puts the highlight straight above the pupil, negative
angles are to the viewer's left of vertical, and +/-180 is straight below.
With this sign convention a corpus dominated by upper-left lighting has a
negative mean tilt.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from . import stats
from .errors import PreconditionError
from .model import AnnotationDocument, Point


class ExternalDataError(ValueError):
    """External comparison CSV is malformed or bins don't line up."""


class Eye(Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True)
class TiltRecord:
    painting_id: str
    face_index: int
    eye: Eye
    tilt_deg: float
    year: int | None


@dataclass(frozen=True)
class InterocularRecord:
    """Angular highlight difference between the two eyes of one face.

    delta_deg is the anatomical (sitter-frame) left-eye tilt minus the
    right-eye tilt, wrapped to (-180, 180].  In storage terms, where eyes
    are labelled in the viewer's frame, that is tilt(right) - tilt(left).
    A nearby light above the face makes it negative; a light at infinity
    makes it zero.
    """

    painting_id: str
    face_index: int
    delta_deg: float
    tilt_left_deg: float
    tilt_right_deg: float


@dataclass(frozen=True)
class TiltHistogram:
    """Relative-percentage histogram over (-180, 180]."""

    bin_width_deg: float
    bin_centers: tuple[float, ...]
    counts: tuple[int, ...]
    percentages: tuple[float, ...]
    n: int

    @property
    def mean_deg(self) -> float:
        """Percentage-weighted bin-centre mean."""
        return sum(c * p for c, p in zip(self.bin_centers, self.percentages)) / 100.0


@dataclass(frozen=True)
class OverlayRow:
    bin_center_deg: float
    ours_pct: float
    external_pct: float


@dataclass(frozen=True)
class OverlayTable:
    rows: tuple[OverlayRow, ...]
    ours_mean_deg: float
    external_mean_deg: float
    mean_gap_deg: float


@dataclass(frozen=True)
class TemporalBin:
    year_start: int
    year_end: int
    mean_deg: float
    sd_deg: float | None
    n: int


@dataclass(frozen=True)
class InterocularResult:
    records: tuple[InterocularRecord, ...]
    counts: tuple[int, int]
    ttest: stats.TTestReport


def wrap_angle_deg(angle: float) -> float:
    """Wrap to (-180, 180]."""
    a = math.fmod(angle, 360.0)
    if a <= -180.0:
        a += 360.0
    elif a > 180.0:
        a -= 360.0
    return a


def tilt_angle(pupil: Point, highlight: Point) -> float:
    """Direction of the pupil-to-highlight vector, degrees in (-180, 180].

    Image coordinates have y pointing down, so "straight above" is the
    negative-y direction: tilt = atan2(w.x, -w.y) for w = highlight - pupil.
    """
    wx = highlight.x - pupil.x
    wy = highlight.y - pupil.y
    if wx == 0.0 and wy == 0.0:
        raise ValueError("highlight coincides with pupil")
    return wrap_angle_deg(math.degrees(math.atan2(wx, -wy)))


def extract_tilt_records(docs: Iterable[AnnotationDocument]) -> list[TiltRecord]:
    """One record per annotated eye, in document order (left eye first)."""
    records = []
    for doc in docs:
        for i, face in enumerate(doc.faces):
            el = face.eyelights
            if el is None:
                continue
            records.append(
                TiltRecord(
                    painting_id=doc.meta.id,
                    face_index=i,
                    eye=Eye.LEFT,
                    tilt_deg=tilt_angle(el.left_pupil, el.left_highlight),
                    year=doc.meta.year,
                )
            )
            records.append(
                TiltRecord(
                    painting_id=doc.meta.id,
                    face_index=i,
                    eye=Eye.RIGHT,
                    tilt_deg=tilt_angle(el.right_pupil, el.right_highlight),
                    year=doc.meta.year,
                )
            )
    return records


def _bin_index(tilt: float, bin_width: float, n_bins: int) -> int:
    # bins are half-open (lo, hi], covering (-180, 180]
    idx = math.ceil((tilt + 180.0) / bin_width) - 1
    return min(max(idx, 0), n_bins - 1)


def corpus_histogram(
    records: list[TiltRecord], bin_width_deg: float = 15.0
) -> TiltHistogram:
    """Relative-percentage tilt histogram; percentages sum to 100."""
    if not records:
        raise PreconditionError("no tilt records")
    if bin_width_deg <= 0 or abs(360.0 / bin_width_deg - round(360.0 / bin_width_deg)) > 1e-9:
        raise ValueError(f"bin width must divide 360, got {bin_width_deg}")
    n_bins = int(round(360.0 / bin_width_deg))
    counts = [0] * n_bins
    for rec in records:
        counts[_bin_index(rec.tilt_deg, bin_width_deg, n_bins)] += 1
    n = len(records)
    centers = tuple(-180.0 + (k + 0.5) * bin_width_deg for k in range(n_bins))
    return TiltHistogram(
        bin_width_deg=bin_width_deg,
        bin_centers=centers,
        counts=tuple(counts),
        percentages=tuple(100.0 * c / n for c in counts),
        n=n,
    )


def compare_external(ours: TiltHistogram, external_csv: str | Path) -> OverlayTable:
    """Overlay an external angle histogram onto ours.

    The external data uses the opposite angle sign, so every angle is
    negated before re-binning (45 becomes -45).  Negated angles must land
    exactly on our bin centres; bins the external data does not mention
    get 0%.
    """
    path = Path(external_csv)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"angle_deg", "percentage"} <= set(
                reader.fieldnames
            ):
                raise ExternalDataError(
                    f"{path}: need columns angle_deg, percentage, "
                    f"got {reader.fieldnames}"
                )
            rows = []
            for line_no, row in enumerate(reader, start=2):
                try:
                    rows.append((float(row["angle_deg"]), float(row["percentage"])))
                except (TypeError, ValueError):
                    raise ExternalDataError(
                        f"{path}:{line_no}: non-numeric angle or percentage"
                    ) from None
    except OSError as e:
        raise ExternalDataError(f"cannot read {path}: {e}") from None
    if not rows:
        raise ExternalDataError(f"{path}: no data rows")

    by_center = {c: 0.0 for c in ours.bin_centers}
    seen = set()
    for angle, pct in rows:
        inverted = -angle
        matches = [c for c in ours.bin_centers if abs(c - inverted) < 1e-6]
        if not matches:
            raise ExternalDataError(
                f"incompatible bins: inverted angle {inverted} is not a bin "
                f"centre of the {ours.bin_width_deg}-degree histogram"
            )
        center = matches[0]
        if center in seen:
            raise ExternalDataError(f"duplicate external bin at {center}")
        seen.add(center)
        by_center[center] = pct

    total_ext = sum(by_center.values())
    if total_ext <= 0:
        raise ExternalDataError("external percentages sum to zero")
    external_mean = sum(c * p for c, p in by_center.items()) / total_ext
    ours_mean = ours.mean_deg
    table_rows = tuple(
        OverlayRow(bin_center_deg=c, ours_pct=p, external_pct=by_center[c])
        for c, p in zip(ours.bin_centers, ours.percentages)
    )
    return OverlayTable(
        rows=table_rows,
        ours_mean_deg=ours_mean,
        external_mean_deg=external_mean,
        mean_gap_deg=ours_mean - external_mean,
    )


def temporal_means(
    records: list[TiltRecord], bin_years: int = 25
) -> list[TemporalBin]:
    """Mean and SD of tilt per dating bin; undated records are skipped.

    Uses the plain arithmetic mean: tilt mass sits far from the +/-180
    wrap in practice, so circular statistics would change nothing.  Inputs
    near the wrap still warn.
    """
    if bin_years <= 0:
        raise ValueError(f"bin_years must be positive, got {bin_years}")
    dated = [r for r in records if r.year is not None]
    if any(abs(r.tilt_deg) > 150.0 for r in dated):
        warnings.warn(
            "tilt values beyond +/-150 degrees present; arithmetic means are "
            "wrap-sensitive there",
            RuntimeWarning,
            stacklevel=2,
        )
    groups: dict[int, list[float]] = {}
    for r in dated:
        start = (r.year // bin_years) * bin_years
        groups.setdefault(start, []).append(r.tilt_deg)
    bins = []
    for start in sorted(groups):
        tilts = groups[start]
        n = len(tilts)
        mean = math.fsum(tilts) / n
        if n > 1:
            sd = math.sqrt(math.fsum((t - mean) ** 2 for t in tilts) / (n - 1))
        else:
            sd = None
        bins.append(
            TemporalBin(
                year_start=start,
                year_end=start + bin_years,
                mean_deg=mean,
                sd_deg=sd,
                n=n,
            )
        )
    return bins


def interocular_test(docs: Iterable[AnnotationDocument]) -> InterocularResult:
    """Highlight-perspective test over all faces with both eyes annotated.

    Only faces lit from above qualify (|tilt| < 90 in both eyes).  The
    per-face delta (sitter-frame left minus right tilt) is negative when a
    painter renders the converging highlights of a nearby light, zero for
    light at infinity; the one-sample t-test checks the corpus mean
    against zero.
    """
    records = []
    counts_neg = 0
    counts_pos = 0
    for doc in docs:
        for i, face in enumerate(doc.faces):
            el = face.eyelights
            if el is None:
                continue
            tilt_viewer_left = tilt_angle(el.left_pupil, el.left_highlight)
            tilt_viewer_right = tilt_angle(el.right_pupil, el.right_highlight)
            if abs(tilt_viewer_left) >= 90.0 or abs(tilt_viewer_right) >= 90.0:
                continue
            # sitter's left eye is the viewer's right one
            delta = wrap_angle_deg(tilt_viewer_right - tilt_viewer_left)
            records.append(
                InterocularRecord(
                    painting_id=doc.meta.id,
                    face_index=i,
                    delta_deg=delta,
                    tilt_left_deg=tilt_viewer_left,
                    tilt_right_deg=tilt_viewer_right,
                )
            )
            if delta < 0:
                counts_neg += 1
            elif delta > 0:
                counts_pos += 1
    if not records:
        raise PreconditionError("no faces qualify for the interocular test")
    try:
        ttest = stats.t_test_one_sample([r.delta_deg for r in records], 0.0)
    except stats.DegenerateInputError as e:
        raise PreconditionError(f"interocular test: {e}") from None
    return InterocularResult(
        records=tuple(records), counts=(counts_neg, counts_pos), ttest=ttest
    )
