"""Deterministic CSV reports over a corpus.

Both the command line and the HTTP service call these builders, so the two
paths produce identical bytes by construction.  Rows are sorted by painting
id; floats are rendered with repr (shortest round-trip form); missing
values are empty fields.  Paintings an analysis cannot use are reported in
the warnings list, never silently dropped.
"""

from __future__ import annotations

import io
import csv
import warnings as warnings_module
from dataclasses import dataclass

from . import eyelights, faces, perspective, shadows
from .corpus import CorpusIndex
from .errors import AnalysisError, ZeroAnalyzableError
from .model import LATERAL_CATEGORIES, AnnotationDocument, DocumentError

ANALYSIS_KINDS = ("perspective", "shadows", "eyelights", "categories")
EYELIGHT_TABLES = ("tilts", "histogram", "interocular", "temporal", "overlay")


@dataclass(frozen=True)
class Report:
    """One analysis run: CSV text plus out-of-band notes.

    warnings name paintings that could not be analyzed; info carries
    summary lines (counts, test statistics) that have no CSV column.
    """

    csv_text: str
    warnings: tuple[str, ...] = ()
    info: tuple[str, ...] = ()


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _iter_documents(
    corpus: CorpusIndex, warnings: list[str]
) -> list[tuple[str, AnnotationDocument]]:
    """Load every annotated painting; unreadable or absent ones warn."""
    out = []
    for entry in corpus.entries:
        pid = entry.painting_id
        if not corpus.has_annotations(pid):
            warnings.append(f"{pid}: not annotated")
            continue
        try:
            out.append((pid, corpus.load_document(pid)))
        except DocumentError as e:
            warnings.append(f"{pid}: unreadable annotations: {e}")
    return out


def perspective_report(
    corpus: CorpusIndex, human_length_m: float = perspective.DEFAULT_HUMAN_LENGTH_M
) -> Report:
    """Size-gradient table: one regression row per analyzable painting."""
    warnings: list[str] = []
    rows = []
    for pid, doc in _iter_documents(corpus, warnings):
        try:
            res = perspective.size_gradient(doc, human_length_m=human_length_m)
        except AnalysisError as e:
            warnings.append(str(e))
            continue
        reg = res.regression
        rows.append(
            [
                pid,
                res.n_figures,
                reg.r_squared,
                reg.intercept,
                reg.intercept_p,
                reg.slope,
                reg.slope_ci95[0],
                reg.slope_ci95[1],
                res.viewpoint_height_lengths,
                res.viewpoint_height_m,
            ]
        )
    if not rows:
        raise ZeroAnalyzableError("no painting has a horizon and 3+ figures", warnings)
    header = [
        "id",
        "n",
        "r_squared",
        "intercept",
        "intercept_p",
        "slope",
        "slope_lo",
        "slope_hi",
        "height_lengths",
        "height_m",
    ]
    return Report(_csv(header, rows), tuple(warnings))


def shadows_report(
    corpus: CorpusIndex, focal_px: float | None = None, deviations: bool = False
) -> Report:
    """Vanishing-angle table, or the per-segment deviation dump."""
    warnings: list[str] = []
    fit_rows = []
    dev_rows = []
    for pid, doc in _iter_documents(corpus, warnings):
        try:
            rep = shadows.fit_shadow_vanishing(doc, focal_px=focal_px)
        except AnalysisError as e:
            warnings.append(str(e))
            continue
        fit_rows.append([pid, rep.theta_deg, rep.cost, rep.n_segments])
        for k, dev in enumerate(rep.per_segment_deviation_deg):
            dev_rows.append([pid, k, dev])
    if not fit_rows:
        raise ZeroAnalyzableError(
            "no painting has a horizon and 2+ shadow segments", warnings
        )
    if deviations:
        return Report(
            _csv(["id", "segment_index", "deviation_deg"], dev_rows), tuple(warnings)
        )
    return Report(
        _csv(["id", "theta_deg", "cost", "n_segments"], fit_rows), tuple(warnings)
    )


def _eyelight_documents(corpus: CorpusIndex, warnings: list[str]):
    return [doc for _, doc in _iter_documents(corpus, warnings)]


def eyelights_report(
    corpus: CorpusIndex,
    table: str = "tilts",
    bin_width_deg: float = 15.0,
    bin_years: int = 25,
    external_csv=None,
) -> Report:
    """One of the eyelight tables; see EYELIGHT_TABLES for the choices."""
    if table not in EYELIGHT_TABLES:
        raise ValueError(f"unknown eyelight table {table!r}; choose from {EYELIGHT_TABLES}")
    warnings: list[str] = []
    docs = _eyelight_documents(corpus, warnings)

    if table == "interocular":
        try:
            result = eyelights.interocular_test(docs)
        except AnalysisError as e:
            raise ZeroAnalyzableError(str(e), warnings) from None
        rows = [
            [r.painting_id, r.face_index, r.delta_deg, r.tilt_left_deg, r.tilt_right_deg]
            for r in result.records
        ]
        t = result.ttest
        info = (
            f"deltas: {result.counts[0]} negative vs {result.counts[1]} positive",
            f"one-sample t-test vs 0: t({t.df}) = {t.t:.4g}, p = {t.p:.4g}, "
            f"mean = {t.mean:.4g}",
        )
        return Report(
            _csv(
                ["painting_id", "face_index", "delta_deg", "tilt_left_deg", "tilt_right_deg"],
                rows,
            ),
            tuple(warnings),
            info,
        )

    records = eyelights.extract_tilt_records(docs)
    if not records:
        raise ZeroAnalyzableError("no eyelight annotations in corpus", warnings)

    if table == "tilts":
        rows = [
            [r.painting_id, r.face_index, r.eye.value, r.tilt_deg, r.year]
            for r in records
        ]
        return Report(
            _csv(["painting_id", "face_index", "eye", "tilt_deg", "year"], rows),
            tuple(warnings),
        )

    if table == "temporal":
        with warnings_module.catch_warnings(record=True) as caught:
            warnings_module.simplefilter("always")
            bins = eyelights.temporal_means(records, bin_years=bin_years)
        warnings.extend(str(w.message) for w in caught)
        if not bins:
            raise ZeroAnalyzableError("no dated eyelight annotations", warnings)
        rows = [[b.year_start, b.year_end, b.mean_deg, b.sd_deg, b.n] for b in bins]
        return Report(
            _csv(["year_start", "year_end", "mean_deg", "sd_deg", "n"], rows),
            tuple(warnings),
        )

    hist = eyelights.corpus_histogram(records, bin_width_deg=bin_width_deg)
    if table == "histogram":
        rows = [
            [c, k, p]
            for c, k, p in zip(hist.bin_centers, hist.counts, hist.percentages)
        ]
        info = (f"n = {hist.n}, weighted mean = {hist.mean_deg:.4g} deg",)
        return Report(
            _csv(["bin_center_deg", "count", "percentage"], rows), tuple(warnings), info
        )

    # overlay
    if external_csv is None:
        raise ValueError("overlay table needs an external histogram CSV")
    overlay = eyelights.compare_external(hist, external_csv)
    rows = [[r.bin_center_deg, r.ours_pct, r.external_pct] for r in overlay.rows]
    info = (
        f"our mean = {overlay.ours_mean_deg:.4g} deg, external mean = "
        f"{overlay.external_mean_deg:.4g} deg, gap = {overlay.mean_gap_deg:.4g} deg",
    )
    return Report(
        _csv(["bin_center_deg", "ours_pct", "external_pct"], rows),
        tuple(warnings),
        info,
    )


def categories_report(corpus: CorpusIndex, bin_years: int = 25) -> Report:
    """Pose/gaze proportion table across year bins."""
    warnings: list[str] = []
    docs = _eyelight_documents(corpus, warnings)
    try:
        table = faces.category_time_table(docs, bin_years=bin_years)
    except AnalysisError as e:
        raise ZeroAnalyzableError(str(e), warnings) from None
    rows = []
    for (start, end), props, n in zip(table.bins, table.proportions, table.counts):
        rows.append([start, end] + [props[c] for c in LATERAL_CATEGORIES] + [n])
    header = ["bin_start", "bin_end"] + [c.value for c in LATERAL_CATEGORIES] + ["n"]
    info = (f"other_rate = {table.other_rate!r}",)
    return Report(_csv(header, rows), tuple(warnings), info)


def run_analysis(kind: str, corpus: CorpusIndex, **options) -> Report:
    """Dispatch an analysis by kind with keyword options.

    Recognized options per kind: perspective(human_length_m),
    shadows(focal_px, deviations), eyelights(table, bin_width_deg,
    bin_years, external_csv), categories(bin_years).
    """
    if kind == "perspective":
        return perspective_report(corpus, **options)
    if kind == "shadows":
        return shadows_report(corpus, **options)
    if kind == "eyelights":
        return eyelights_report(corpus, **options)
    if kind == "categories":
        return categories_report(corpus, **options)
    raise ValueError(f"unknown analysis kind {kind!r}; choose from {ANALYSIS_KINDS}")
