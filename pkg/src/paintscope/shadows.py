"""Cast-shadow convergence: fit one shadow vanishing point per painting.

Sunlit cast shadows of upright figures are parallel on the ground, so their
images converge to a single point on the horizon.  That point is fit as a
vanishing angle theta: the x offset from the image centre expressed through
an assumed focal distance (by default the painting's width), so theta = 0
puts the point at the centre vertical and theta = +/-90 puts it at infinity
(shadows horizontal in the picture plane).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import stats
from .errors import PreconditionError
from .model import AnnotationDocument, HorizonAnnotation, PaintingMeta, Point

GRID_STEP_DEG = 0.1
REFINE_TOL_DEG = 0.001


@dataclass(frozen=True)
class ShadowFitReport:
    theta_deg: float
    cost: float
    n_segments: int
    per_segment_deviation_deg: tuple[float, ...]


def vanishing_x(theta_deg: float, meta: PaintingMeta, focal_px: float | None = None) -> float:
    """Horizon x of the vanishing point for a given angle.

    x = width/2 + focal * tan(theta), focal defaulting to the painting
    width; +/-90 degrees map to signed infinity.
    """
    if abs(theta_deg) > 90.0:
        raise ValueError(f"theta must be within [-90, 90], got {theta_deg}")
    f = meta.width_px if focal_px is None else focal_px
    if theta_deg == 90.0:
        return math.inf
    if theta_deg == -90.0:
        return -math.inf
    return meta.width_px / 2.0 + f * math.tan(math.radians(theta_deg))


def model_direction(
    foot: Point,
    theta_deg: float,
    h: HorizonAnnotation,
    meta: PaintingMeta,
    focal_px: float | None = None,
) -> tuple[float, float]:
    """Unit vector from a figure's foot toward the vanishing point.

    At theta = +90 the fixed limit (-1, 0) is returned, at -90 it is
    (+1, 0); the fit cost is orientation-free, so only the line direction
    matters there.
    """
    if theta_deg >= 90.0:
        return (-1.0, 0.0)
    if theta_deg <= -90.0:
        return (1.0, 0.0)
    xv = vanishing_x(theta_deg, meta, focal_px)
    dx = xv - foot.x
    dy = h.y_h - foot.y
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        raise ValueError("foot coincides with the vanishing point")
    return (dx / norm, dy / norm)


def _unit(p: Point, q: Point) -> tuple[float, float]:
    dx, dy = q.x - p.x, q.y - p.y
    norm = math.hypot(dx, dy)
    return (dx / norm, dy / norm)


def segment_misfit(u: tuple[float, float], v: tuple[float, float]) -> float:
    """Per-segment residual: 1 - |u . v|, zero iff collinear.

    The absolute value makes the fit insensitive to whether a shadow points
    toward or away from the vanishing point (front vs back lighting).
    """
    return 1.0 - abs(u[0] * v[0] + u[1] * v[1])


def _shadow_segments(doc: AnnotationDocument) -> list[tuple[Point, tuple[float, float]]]:
    segs = []
    for fig in doc.figures:
        if fig.shadow_end is not None:
            segs.append((fig.foot, _unit(fig.foot, fig.shadow_end)))
    return segs


def fit_shadow_vanishing(
    doc: AnnotationDocument,
    focal_px: float | None = None,
    misfit=segment_misfit,
) -> ShadowFitReport:
    """Find the vanishing angle minimizing the RMS segment misfit.

    cost(theta) = sqrt(mean_i misfit(u_i, v_i(theta))^2) over annotated
    shadow segments.  A 0.1-degree grid scan over [-90, 90] removes
    local-minimum risk, then golden-section refinement pins theta to
    0.001 degrees.
    """
    if doc.horizon is None:
        raise PreconditionError(f"{doc.meta.id}: no horizon annotation")
    segs = _shadow_segments(doc)
    if len(segs) < 2:
        raise PreconditionError(
            f"{doc.meta.id}: need at least 2 shadow segments, have {len(segs)}"
        )
    horizon, meta = doc.horizon, doc.meta

    def cost(theta: float) -> float:
        total = 0.0
        for foot, u in segs:
            v = model_direction(foot, theta, horizon, meta, focal_px)
            d = misfit(u, v)
            total += d * d
        return math.sqrt(total / len(segs))

    n_grid = int(round(180.0 / GRID_STEP_DEG))
    best_theta, best_cost = -90.0, cost(-90.0)
    for k in range(1, n_grid + 1):
        theta = -90.0 + k * GRID_STEP_DEG
        c = cost(theta)
        if c < best_cost:
            best_theta, best_cost = theta, c

    lo = max(-90.0, best_theta - GRID_STEP_DEG)
    hi = min(90.0, best_theta + GRID_STEP_DEG)
    theta_star, cost_star = _golden_section(cost, lo, hi, REFINE_TOL_DEG)
    if best_cost < cost_star:
        theta_star, cost_star = best_theta, best_cost

    deviations = []
    for foot, u in segs:
        v = model_direction(foot, theta_star, horizon, meta, focal_px)
        dot = min(1.0, abs(u[0] * v[0] + u[1] * v[1]))
        deviations.append(math.degrees(math.acos(dot)))
    return ShadowFitReport(
        theta_deg=theta_star,
        cost=cost_star,
        n_segments=len(segs),
        per_segment_deviation_deg=tuple(deviations),
    )


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = c if fc < fd else d
    return x, min(fc, fd)


def angle_cost_correlation(reports: list[ShadowFitReport]) -> tuple[float, float]:
    """Correlation between unsigned vanishing angle and residual cost.

    A positive correlation means fits degrade as the light leaves the
    picture plane.  Degenerate inputs (fewer than 3 reports, constant
    angles or costs) propagate stats.DegenerateInputError.
    """
    if len(reports) < 3:
        raise stats.DegenerateInputError(
            f"need at least 3 reports, got {len(reports)}"
        )
    return stats.pearson([abs(r.theta_deg) for r in reports], [r.cost for r in reports])
