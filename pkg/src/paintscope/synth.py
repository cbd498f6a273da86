"""Synthetic ground-truth scenes for exercising every estimator.

A level pinhole camera at height ``camera_height_m`` looks along +z over a
flat ground plane; upright figures of known height stand on the plane and a
distant sun casts their shadows.  Rendering produces ordinary annotation
documents whose size gradient, horizon and shadow geometry are known in
closed form.  A separate two-sphere eye model produces eyelight pairs with
an exact specular reflection solve.

World frame for scenes: x right, y up (ground at y=0), z away from the
camera.  Image frame: pixels, origin top-left, y down, principal point at
the image centre.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .model import (
    AnnotationDocument,
    EyelightPair,
    FigureAnnotation,
    HorizonAnnotation,
    PaintingMeta,
    Point,
    validate_document,
)


class SceneError(ValueError):
    """A scene cannot be rendered into a valid annotation document."""


@dataclass(frozen=True)
class SyntheticScene:
    """Pinhole camera over flat ground with upright figures and a sun.

    Attributes:
        camera_height_m: eye point height above the ground plane.
        focal_px: focal length in pixels.
        image_size: (width, height) in pixels.
        figure_height_m: common height of all figures.
        figure_positions: ground coordinates (x_m, z_m) of each figure's
            feet; z_m > 0 (in front of the camera).
        sun_azimuth_deg: sun direction measured from the viewing axis
            (+z) toward +x; 90 puts the sun exactly to the right.
        sun_elevation_deg: sun altitude above the horizon, in (0, 90).
    """

    camera_height_m: float
    focal_px: float
    image_size: tuple[int, int]
    figure_height_m: float
    figure_positions: tuple[tuple[float, float], ...]
    sun_azimuth_deg: float
    sun_elevation_deg: float

    def __post_init__(self):
        object.__setattr__(
            self,
            "figure_positions",
            tuple((float(x), float(z)) for x, z in self.figure_positions),
        )
        if self.camera_height_m <= 0:
            raise SceneError("camera_height_m must be positive")
        if self.focal_px <= 0:
            raise SceneError("focal_px must be positive")
        if self.figure_height_m <= 0:
            raise SceneError("figure_height_m must be positive")
        w, h = self.image_size
        if w <= 0 or h <= 0:
            raise SceneError(f"image_size must be positive, got {self.image_size}")
        if not 0.0 < self.sun_elevation_deg < 90.0:
            raise SceneError(
                f"sun_elevation_deg must be in (0, 90), got {self.sun_elevation_deg}"
            )
        for i, (_, z) in enumerate(self.figure_positions):
            if z <= 0:
                raise SceneError(f"figure {i} behind the camera (z_m = {z})")


def true_slope(scene: SyntheticScene) -> float:
    """Exact size-gradient slope: figure height over camera height."""
    return scene.figure_height_m / scene.camera_height_m


def true_vanishing_angle_deg(
    scene: SyntheticScene, focal_assumed_px: float | None = None
) -> float:
    """Shadow vanishing angle the fit should recover.

    ``focal_assumed_px`` is the focal length the *fit* assumes (defaults to
    the image width, matching fit_shadow_vanishing); the scene's own focal
    determines where the vanishing point actually lands.
    """
    if focal_assumed_px is None:
        focal_assumed_px = float(scene.image_size[0])
    az = math.radians(scene.sun_azimuth_deg)
    if abs(math.cos(az)) < 1e-12:
        return math.copysign(90.0, math.sin(az))
    return math.degrees(math.atan(scene.focal_px * math.tan(az) / focal_assumed_px))


def _project(scene: SyntheticScene, x_m: float, y_m: float, z_m: float) -> Point:
    """World point to image pixel (camera at (0, camera_height, 0))."""
    if z_m <= 0:
        raise SceneError(f"point at z_m = {z_m} not in front of the camera")
    w, h = scene.image_size
    cx, cy = w / 2.0, h / 2.0
    return Point(
        cx + scene.focal_px * x_m / z_m,
        cy + scene.focal_px * (scene.camera_height_m - y_m) / z_m,
    )


def _shadow_tip_ground(scene: SyntheticScene, x_m: float, z_m: float) -> tuple[float, float]:
    """Ground coordinates of the figure-head shadow tip."""
    az = math.radians(scene.sun_azimuth_deg)
    length = scene.figure_height_m / math.tan(math.radians(scene.sun_elevation_deg))
    return (x_m - length * math.sin(az), z_m - length * math.cos(az))


def render_annotations(
    scene: SyntheticScene,
    painting_id: str = "synthetic",
    title: str = "synthetic scene",
    year: int | None = None,
    include_shadows: bool = True,
) -> AnnotationDocument:
    """Exact pinhole rendering of a scene into an annotation document.

    The horizon sits at the image centre row (level camera); every head,
    foot and shadow tip is projected exactly.  Raises SceneError if any
    point lands outside the image — generation is responsible for placing
    figures, rendering never clips.
    """
    w, h = scene.image_size
    figures = []
    for i, (x_m, z_m) in enumerate(scene.figure_positions):
        foot = _project(scene, x_m, 0.0, z_m)
        head = _project(scene, x_m, scene.figure_height_m, z_m)
        shadow_end = None
        if include_shadows:
            sx, sz = _shadow_tip_ground(scene, x_m, z_m)
            if sz <= 0:
                raise SceneError(f"figure {i}: shadow tip behind the camera")
            shadow_end = _project(scene, sx, 0.0, sz)
        for name, p in (("head", head), ("foot", foot), ("shadow tip", shadow_end)):
            if p is not None and not (0 <= p.x <= w and 0 <= p.y <= h):
                raise SceneError(
                    f"figure {i}: {name} projects outside the image at "
                    f"({p.x:.1f}, {p.y:.1f})"
                )
        figures.append(FigureAnnotation(head=head, foot=foot, shadow_end=shadow_end))
    doc = AnnotationDocument(
        meta=PaintingMeta(
            id=painting_id,
            title=title,
            year=year,
            width_px=w,
            height_px=h,
            image_path="",
        ),
        horizon=HorizonAnnotation(y_h=h / 2.0),
        figures=tuple(figures),
        faces=(),
    )
    validate_document(doc)
    return doc


def generate_scene(
    seed: int,
    camera_height_m: float,
    n_figures: int,
    image_size: tuple[int, int] = (900, 1200),
    focal_px: float | None = None,
    figure_height_m: float = 1.65,
    sun_azimuth_deg: float = 25.0,
    sun_elevation_deg: float = 42.0,
    margin_px: float = 10.0,
    min_length_px: float = 25.0,
) -> SyntheticScene:
    """Sample figure positions that render fully inside the image.

    Rejection-sampled with a seeded RNG: candidate ground positions are
    drawn uniformly in depth and across the view frustum, and kept only if
    head, foot and shadow tip all project at least ``margin_px`` inside
    the frame.  Deterministic for a given argument tuple.
    """
    if n_figures < 1:
        raise SceneError("n_figures must be at least 1")
    w, h = image_size
    if focal_px is None:
        focal_px = float(w)
    f = float(focal_px)
    cy = h / 2.0
    big_h = camera_height_m
    fig_h = figure_height_m
    # Depth range: feet above the bottom margin, figures no smaller than
    # min_length_px, heads below the top margin when the camera is low.
    z_min = f * big_h / (cy - margin_px)
    if big_h < fig_h:
        z_min = max(z_min, f * (fig_h - big_h) / (cy - margin_px))
    z_max = f * fig_h / min_length_px
    if z_max <= z_min:
        raise SceneError(
            f"no viable depth range for camera height {big_h} m at this "
            f"image size (z_min {z_min:.2f} >= z_max {z_max:.2f})"
        )
    rng = random.Random(seed)
    probe = SyntheticScene(
        camera_height_m=camera_height_m,
        focal_px=f,
        image_size=(w, h),
        figure_height_m=fig_h,
        figure_positions=(),
        sun_azimuth_deg=sun_azimuth_deg,
        sun_elevation_deg=sun_elevation_deg,
    )
    positions: list[tuple[float, float]] = []
    attempts = 0
    while len(positions) < n_figures:
        attempts += 1
        if attempts > 1000 * n_figures:
            raise SceneError(
                f"could not place {n_figures} figures after {attempts} attempts"
            )
        z = rng.uniform(z_min, z_max)
        half_width_m = (w / 2.0 - margin_px) * z / f
        x = rng.uniform(-half_width_m, half_width_m)
        sx, sz = _shadow_tip_ground(probe, x, z)
        if sz <= 0.1:
            continue
        tip = _project(probe, sx, 0.0, sz)
        foot = _project(probe, x, 0.0, z)
        head = _project(probe, x, fig_h, z)
        ok = all(
            margin_px <= p.x <= w - margin_px and margin_px <= p.y <= h - margin_px
            for p in (tip, foot, head)
        )
        if ok:
            positions.append((x, z))
    return SyntheticScene(
        camera_height_m=camera_height_m,
        focal_px=f,
        image_size=(w, h),
        figure_height_m=fig_h,
        figure_positions=tuple(positions),
        sun_azimuth_deg=sun_azimuth_deg,
        sun_elevation_deg=sun_elevation_deg,
    )


def scene_to_json(scene: SyntheticScene) -> dict:
    return {
        "camera_height_m": scene.camera_height_m,
        "focal_px": scene.focal_px,
        "image_size": list(scene.image_size),
        "figure_height_m": scene.figure_height_m,
        "figure_positions": [list(p) for p in scene.figure_positions],
        "sun_azimuth_deg": scene.sun_azimuth_deg,
        "sun_elevation_deg": scene.sun_elevation_deg,
    }


def scene_from_json(data) -> SyntheticScene:
    if not isinstance(data, dict):
        raise SceneError("scene spec must be a JSON object")
    required = {
        "camera_height_m",
        "focal_px",
        "image_size",
        "figure_height_m",
        "figure_positions",
        "sun_azimuth_deg",
        "sun_elevation_deg",
    }
    missing = required - data.keys()
    if missing:
        raise SceneError(f"scene spec missing field(s) {sorted(missing)}")
    try:
        return SyntheticScene(
            camera_height_m=float(data["camera_height_m"]),
            focal_px=float(data["focal_px"]),
            image_size=(int(data["image_size"][0]), int(data["image_size"][1])),
            figure_height_m=float(data["figure_height_m"]),
            figure_positions=tuple(
                (float(x), float(z)) for x, z in data["figure_positions"]
            ),
            sun_azimuth_deg=float(data["sun_azimuth_deg"]),
            sun_elevation_deg=float(data["sun_elevation_deg"]),
        )
    except (TypeError, ValueError, IndexError) as e:
        if isinstance(e, SceneError):
            raise
        raise SceneError(f"malformed scene spec: {e}") from None


def scene_dumps(scene: SyntheticScene) -> str:
    return json.dumps(scene_to_json(scene), sort_keys=True, indent=2) + "\n"


# --- two-sphere eye model ---------------------------------------------------
#
# Eye frame: x to the viewer's right, y up, z toward the viewer, who sits
# at z = +infinity (orthographic).  Image coordinates flip y.


@dataclass(frozen=True)
class DistantLight:
    """Light at infinity; direction points from the scene toward the light."""

    direction: tuple[float, float, float]

    def __post_init__(self):
        d = tuple(float(v) for v in self.direction)
        norm = math.sqrt(sum(v * v for v in d))
        if norm == 0:
            raise ValueError("light direction must be nonzero")
        object.__setattr__(self, "direction", tuple(v / norm for v in d))


_VIEW = (0.0, 0.0, 1.0)


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _scale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _norm(a):
    return math.sqrt(_dot(a, a))


def _unit(a):
    n = _norm(a)
    if n == 0:
        raise ValueError("zero vector")
    return _scale(a, 1.0 / n)


def solve_reflection(
    light: Sequence[float] | DistantLight,
    centre: Sequence[float],
    radius: float,
) -> tuple[float, float, float]:
    """Point on the sphere reflecting the light toward a frontal viewer.

    For a distant light the mirror normal is the half-vector of light and
    view directions (closed form).  For a point light the normal lies in
    the plane spanned by the view axis and the centre-to-light vector; its
    in-plane angle is found by bisecting the angle-of-incidence =
    angle-of-reflection residual to 1e-12 rad.

    Raises SceneError when the light is behind the head (no visible
    reflection) and ValueError for degenerate geometry.
    """
    if radius <= 0:
        raise ValueError("eye radius must be positive")
    c = tuple(float(v) for v in centre)
    if isinstance(light, DistantLight):
        l = light.direction
        if _dot(l, _VIEW) < -1e-12:
            raise SceneError("no visible reflection: light behind the head")
        n = _unit(_add(l, _VIEW))
        return _add(c, _scale(n, radius))

    lp = tuple(float(v) for v in light)
    d = _sub(lp, c)
    dist = _norm(d)
    if dist <= radius:
        raise ValueError("light source inside the eye sphere")
    if _dot(d, _VIEW) < -1e-12:
        raise SceneError("no visible reflection: light behind the head")
    d_hat = _unit(d)
    cos_phi_d = max(-1.0, min(1.0, _dot(d_hat, _VIEW)))
    phi_d = math.acos(cos_phi_d)
    if phi_d < 1e-12:
        # Light straight down the viewing axis: highlight would coincide
        # with the pupil, which annotations cannot represent.
        raise ValueError("light along the viewing axis gives no offset highlight")
    e2 = _unit(_sub(d_hat, _scale(_VIEW, cos_phi_d)))

    def residual(phi: float) -> float:
        n = _add(_scale(_VIEW, math.cos(phi)), _scale(e2, math.sin(phi)))
        p = _add(c, _scale(n, radius))
        to_light = _unit(_sub(lp, p))
        incidence = math.acos(max(-1.0, min(1.0, _dot(n, to_light))))
        return incidence - phi  # reflection angle toward the viewer is phi

    lo, hi = 0.0, phi_d
    r_lo = residual(lo)
    if r_lo < 0:
        raise ValueError("reflection bracket failed at phi = 0")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    phi = 0.5 * (lo + hi)
    n = _add(_scale(_VIEW, math.cos(phi)), _scale(e2, math.sin(phi)))
    return _add(c, _scale(n, radius))


def render_eyelights(
    light: Sequence[float] | DistantLight,
    eye_centres: tuple[Sequence[float], Sequence[float]],
    eye_radius: float,
) -> EyelightPair:
    """Orthographic pupil/highlight pair for two eye spheres.

    Eyes are sorted by x so "left" is the viewer's left, matching the
    annotation convention.  The pupil is the projection of the sphere
    centre; the highlight is the projection of the exact reflection point.
    """
    a = tuple(float(v) for v in eye_centres[0])
    b = tuple(float(v) for v in eye_centres[1])
    if _norm(_sub(a, b)) < 2 * eye_radius:
        raise ValueError("eye spheres intersect")
    left_c, right_c = sorted((a, b), key=lambda p: p[0])

    def image_point(p3) -> Point:
        return Point(p3[0], -p3[1])

    left_hl = solve_reflection(light, left_c, eye_radius)
    right_hl = solve_reflection(light, right_c, eye_radius)
    return EyelightPair(
        left_pupil=image_point(left_c),
        left_highlight=image_point(left_hl),
        right_pupil=image_point(right_c),
        right_highlight=image_point(right_hl),
    )
