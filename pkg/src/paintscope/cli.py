"""Command-line entry points.

Subcommands: analyze (CSV reports), average (composite PNGs), synth
(ground-truth corpora), serve (HTTP API + annotation UI), validate
(annotation files).  Exit codes are pinned for scripting: 0 success,
1 usage error, 2 data error.  CSV goes to stdout (or --out); warnings and
summary notes go to stderr.

The corpus root comes from --corpus or the PAINTSCOPE_CORPUS environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import eyelights as eyelights_module
from . import faces, reports, synth
from .corpus import CorpusEntry, CorpusError, CorpusIndex, load_corpus, write_index
from .errors import AnalysisError, ZeroAnalyzableError
from .model import (
    AnnotationDocument,
    DocumentError,
    FaceAnnotation,
    PoseGaze,
    load_document,
    save_document,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

CORPUS_ENV = "PAINTSCOPE_CORPUS"


class UsageError(Exception):
    """Bad arguments detected after argparse (maps to exit code 1)."""


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool pins usage to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_target(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        target = (int(w), int(h))
    except ValueError:
        raise UsageError(f"--target must look like 256x256, got {text!r}") from None
    if target[0] <= 0 or target[1] <= 0:
        raise UsageError(f"--target dimensions must be positive, got {text!r}")
    return target


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paintscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_corpus(p):
        p.add_argument(
            "--corpus",
            default=os.environ.get(CORPUS_ENV),
            help=f"corpus root directory (default: ${CORPUS_ENV})",
        )

    p = sub.add_parser("analyze", help="run an analysis, emit CSV")
    p.add_argument("kind", choices=reports.ANALYSIS_KINDS)
    add_corpus(p)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--human-length-m", type=float, default=1.65)
    p.add_argument("--bin-years", type=int, default=25)
    p.add_argument("--bin-width-deg", type=float, default=15.0)
    p.add_argument("--table", choices=reports.EYELIGHT_TABLES, default="tilts",
                   help="which eyelight table to emit (kind=eyelights)")
    p.add_argument("--external", help="external histogram CSV (eyelights overlay)")
    p.add_argument("--focal-px", type=float, default=None,
                   help="override the focal = painting-width assumption (shadows)")
    p.add_argument("--deviations", action="store_true",
                   help="emit per-segment deviations instead of the fit table (shadows)")

    p = sub.add_parser("average", help="averaged composite PNG over a selection")
    add_corpus(p)
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--mode", choices=("faces", "paintings"), default="faces")
    p.add_argument("--categories", default="all",
                   help="comma-separated pose/gaze codes, or 'all' (faces mode)")
    p.add_argument("--target", default=None, help="output size WxH")

    p = sub.add_parser("synth", help="write a synthetic ground-truth corpus")
    p.add_argument("spec", help="sweep spec JSON file")
    p.add_argument("--out", required=True, help="corpus directory to create")

    p = sub.add_parser("serve", help="serve the corpus and annotation UI over HTTP")
    add_corpus(p)
    p.add_argument("--bind", default="127.0.0.1:8601", help="HOST:PORT")
    p.add_argument("--ui", default=None, help="directory with the built UI bundle")

    p = sub.add_parser("validate", help="check annotation files")
    add_corpus(p)
    p.add_argument("files", nargs="*", help="annotation files (default: whole corpus)")

    return parser


def _require_corpus(args) -> CorpusIndex:
    if not args.corpus:
        raise UsageError(f"no corpus given: pass --corpus or set ${CORPUS_ENV}")
    return load_corpus(args.corpus)


def _emit_report(report: reports.Report, out: str | None) -> None:
    for line in report.warnings:
        print(f"warning: {line}", file=sys.stderr)
    for line in report.info:
        print(line, file=sys.stderr)
    if out:
        Path(out).write_text(report.csv_text, encoding="utf-8")
    else:
        sys.stdout.write(report.csv_text)


def _cmd_analyze(args) -> int:
    corpus = _require_corpus(args)
    kind = args.kind
    if kind == "perspective":
        options = {"human_length_m": args.human_length_m}
    elif kind == "shadows":
        options = {"focal_px": args.focal_px, "deviations": args.deviations}
    elif kind == "eyelights":
        options = {
            "table": args.table,
            "bin_width_deg": args.bin_width_deg,
            "bin_years": args.bin_years,
        }
        if args.table == "overlay":
            if not args.external:
                raise UsageError("--table overlay needs --external CSV")
            options["external_csv"] = args.external
    else:
        options = {"bin_years": args.bin_years}
    report = reports.run_analysis(kind, corpus, **options)
    _emit_report(report, args.out)
    return EXIT_OK


def _parse_categories(text: str) -> set[PoseGaze]:
    if text.strip().lower() == "all":
        return set(PoseGaze)
    out = set()
    for code in text.split(","):
        code = code.strip()
        try:
            out.add(PoseGaze(code))
        except ValueError:
            raise UsageError(
                f"unknown category {code!r}; choose from "
                f"{[c.value for c in PoseGaze]} or 'all'"
            ) from None
    return out


def _cmd_average(args) -> int:
    corpus = _require_corpus(args)
    if args.mode == "paintings":
        target = _parse_target(args.target) if args.target else faces.DEFAULT_PAINTING_TARGET
        with_images = [e for e in corpus.entries if e.image_path is not None]
        if not with_images:
            raise ZeroAnalyzableError("corpus has no images to average")

        def painting_images():
            for entry in with_images:
                with corpus.load_image(entry.painting_id) as im:
                    yield im.convert("RGB")

        composite = faces.average_images(painting_images(), target)
    else:
        target = _parse_target(args.target) if args.target else faces.DEFAULT_FACE_TARGET
        selection = _parse_categories(args.categories)
        composite = faces.average_faces_by_category(corpus, selection, target)
    composite.save_png(args.out)
    print(f"averaged {composite.n_images} images -> {args.out}", file=sys.stderr)
    return EXIT_OK


# --- synth corpus writing ----------------------------------------------------

_SCENE_KEYS = {
    "id",
    "year",
    "camera_height_m",
    "n_figures",
    "image_size",
    "focal_px",
    "figure_height_m",
    "sun_azimuth_deg",
    "sun_elevation_deg",
    "eyelights",
}
_EYELIGHT_KEYS = {
    "light_px",
    "n_faces",
    "eye_radius_px",
    "eye_gap_px",
    "face_size_px",
    "eye_row_y_px",
}


class SynthSpecError(ValueError):
    pass


def _spec_painting(defaults: dict, override: dict, index: int) -> dict:
    for source, where in ((defaults, "defaults"), (override, f"paintings[{index}]")):
        unknown = source.keys() - _SCENE_KEYS
        if unknown:
            raise SynthSpecError(f"{where}: unknown field(s) {sorted(unknown)}")
    merged = dict(defaults)
    merged.update(override)
    merged.setdefault("id", f"synth-{index:03d}")
    if "camera_height_m" not in merged:
        raise SynthSpecError(f"paintings[{index}]: camera_height_m missing")
    return merged


def _render_synth_eyelights(cfg: dict, width: int, height: int, where: str):
    """Faces in a row, each a two-sphere eye pair lit by one point light.

    light_px is (x, y, z) with image-style y (down) and z toward the
    viewer, in pixels.  Returns (faces, deltas_deg).
    """
    unknown = cfg.keys() - _EYELIGHT_KEYS
    if unknown:
        raise SynthSpecError(f"{where}: unknown field(s) {sorted(unknown)}")
    try:
        light_px = [float(v) for v in cfg["light_px"]]
        n_faces = int(cfg["n_faces"])
    except (KeyError, TypeError, ValueError) as e:
        raise SynthSpecError(f"{where}: needs light_px [x,y,z] and n_faces: {e}") from None
    if len(light_px) != 3 or n_faces < 1:
        raise SynthSpecError(f"{where}: needs light_px [x,y,z] and n_faces >= 1")
    radius = float(cfg.get("eye_radius_px", 6.0))
    gap = float(cfg.get("eye_gap_px", 30.0))
    size = float(cfg.get("face_size_px", 90.0))
    row_y = float(cfg.get("eye_row_y_px", height * 0.25))
    light_world = (light_px[0], -light_px[1], light_px[2])
    xs = [(j + 1) * width / (n_faces + 1) for j in range(n_faces)]
    face_list = []
    deltas = []
    for fx in xs:
        centres = ((fx - gap / 2, -row_y, 0.0), (fx + gap / 2, -row_y, 0.0))
        pair = synth.render_eyelights(light_world, centres, radius)
        bbox = (fx - size / 2, row_y - size / 2, size, size)
        face_list.append(
            FaceAnnotation(
                bbox=bbox,
                category=PoseGaze.FRONT_FACING_FRONT_GAZING,
                eyelights=pair,
            )
        )
        tilt_viewer_left = eyelights_module.tilt_angle(pair.left_pupil, pair.left_highlight)
        tilt_viewer_right = eyelights_module.tilt_angle(pair.right_pupil, pair.right_highlight)
        deltas.append(
            eyelights_module.wrap_angle_deg(tilt_viewer_right - tilt_viewer_left)
        )
    return face_list, deltas


def synth_corpus(spec_data: dict, out_dir: str | os.PathLike) -> dict:
    """Materialize a sweep spec into a corpus directory with ground truth.

    Spec: {"seed": int, "defaults": {...}, "paintings": [{...}, ...]} where
    each painting entry may set id, year, camera_height_m (required
    somewhere), n_figures, image_size, focal_px, figure_height_m,
    sun_azimuth_deg, sun_elevation_deg, and an optional eyelights block.
    Returns the ground-truth mapping also written to ground_truth.json.
    """
    if not isinstance(spec_data, dict):
        raise SynthSpecError("sweep spec must be a JSON object")
    unknown = spec_data.keys() - {"seed", "defaults", "paintings"}
    if unknown:
        raise SynthSpecError(f"sweep spec: unknown field(s) {sorted(unknown)}")
    seed = spec_data.get("seed", 0)
    defaults = spec_data.get("defaults", {})
    paintings = spec_data.get("paintings")
    if not isinstance(paintings, list) or not paintings:
        raise SynthSpecError("sweep spec needs a non-empty 'paintings' array")

    out_dir = Path(out_dir)
    (out_dir / "annotations").mkdir(parents=True, exist_ok=True)
    entries = []
    ground_truth = {}
    for i, override in enumerate(paintings):
        if not isinstance(override, dict):
            raise SynthSpecError(f"paintings[{i}]: expected object")
        merged = _spec_painting(defaults, override, i)
        pid = str(merged["id"])
        image_size = tuple(merged.get("image_size", (900, 1200)))
        n_figures = int(merged.get("n_figures", 8))
        if n_figures < 1:
            raise SynthSpecError(f"paintings[{i}]: n_figures must be >= 1")
        scene = synth.generate_scene(
            seed=seed + i,
            camera_height_m=float(merged["camera_height_m"]),
            n_figures=n_figures,
            image_size=(int(image_size[0]), int(image_size[1])),
            focal_px=merged.get("focal_px"),
            figure_height_m=float(merged.get("figure_height_m", 1.65)),
            sun_azimuth_deg=float(merged.get("sun_azimuth_deg", 25.0)),
            sun_elevation_deg=float(merged.get("sun_elevation_deg", 42.0)),
        )
        year = merged.get("year")
        doc = synth.render_annotations(
            scene, painting_id=pid, title=f"synthetic {pid}", year=year
        )
        truth = {
            "slope": synth.true_slope(scene),
            "viewpoint_height_m": scene.camera_height_m,
            "camera_height_m": scene.camera_height_m,
            "figure_height_m": scene.figure_height_m,
            "theta_deg": synth.true_vanishing_angle_deg(scene),
        }
        if "eyelights" in merged:
            face_list, deltas = _render_synth_eyelights(
                merged["eyelights"], image_size[0], image_size[1],
                f"paintings[{i}].eyelights",
            )
            doc = AnnotationDocument(
                meta=doc.meta, horizon=doc.horizon, figures=doc.figures,
                faces=tuple(face_list),
            )
            truth["deltas_deg"] = deltas
        save_document(doc, out_dir / "annotations" / f"{pid}.json")
        entries.append(
            CorpusEntry(
                painting_id=pid,
                image_path=None,
                annotation_path=f"annotations/{pid}.json",
                year=year,
            )
        )
        ground_truth[pid] = truth
    write_index(out_dir, entries)
    gt_text = json.dumps(ground_truth, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    (out_dir / "ground_truth.json").write_text(gt_text, encoding="utf-8")
    return ground_truth


def _cmd_synth(args) -> int:
    spec_path = Path(args.spec)
    if not spec_path.exists():
        raise UsageError(f"spec file {args.spec!r} not found")
    try:
        spec_data = json.loads(spec_path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SynthSpecError(f"unreadable spec {args.spec!r}: {e}") from None
    ground_truth = synth_corpus(spec_data, args.out)
    print(f"wrote {len(ground_truth)} paintings -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args) -> int:
    corpus = _require_corpus(args)
    try:
        host, port_text = args.bind.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        raise UsageError(f"--bind must look like HOST:PORT, got {args.bind!r}") from None
    from .service import create_app
    import uvicorn

    app = create_app(corpus, ui_dir=args.ui)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


def _cmd_validate(args) -> int:
    if args.files:
        paths = [Path(f) for f in args.files]
    else:
        corpus = _require_corpus(args)
        paths = []
        for entry in corpus.entries:
            p = corpus.annotation_file(entry.painting_id)
            if p.exists():
                paths.append(p)
            else:
                print(f"{entry.painting_id}: not annotated (skipped)", file=sys.stderr)
    failures = 0
    for path in paths:
        try:
            load_document(path)
        except DocumentError as e:
            failures += 1
            print(f"{path}: {type(e).__name__}: {e}")
        except OSError as e:
            failures += 1
            print(f"{path}: {e}")
        else:
            print(f"{path}: OK")
    return EXIT_DATA if failures else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "analyze": _cmd_analyze,
        "average": _cmd_average,
        "synth": _cmd_synth,
        "serve": _cmd_serve,
        "validate": _cmd_validate,
    }[args.command]
    try:
        return handler(args)
    except UsageError as e:
        print(f"paintscope: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroAnalyzableError as e:
        for line in e.warnings:
            print(f"warning: {line}", file=sys.stderr)
        print(f"paintscope: {e}", file=sys.stderr)
        return EXIT_DATA
    except (
        AnalysisError,
        CorpusError,
        DocumentError,
        SynthSpecError,
        synth.SceneError,
        eyelights_module.ExternalDataError,
    ) as e:
        print(f"paintscope: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"paintscope: {e}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
