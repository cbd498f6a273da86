"""Size-gradient analysis: how fast figures shrink toward the horizon.

For a level view over a flat ground plane, a figure's projected vertical
extent is proportional to its feet's distance below the horizon, with
slope = figure height / eye height.  Regressing annotated lengths on those
distances therefore measures both perspective accuracy (fit quality,
intercept at zero) and the viewpoint elevation (reciprocal slope).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import stats
from .errors import NonPositiveSlopeError, PreconditionError
from .model import AnnotationDocument, FigureAnnotation, HorizonAnnotation

DEFAULT_HUMAN_LENGTH_M = 1.65

#: Figure size is the segment's vertical extent, not its Euclidean length:
#: the slope-to-height identity is exact only for vertical extents, and a
#: leaning annotation line would otherwise bias the slope high.
LENGTH_DEFINITION = "vertical_extent"


@dataclass(frozen=True)
class SizeGradientResult:
    regression: stats.RegressionReport
    viewpoint_height_lengths: float
    viewpoint_height_m: float
    n_figures: int
    human_length_m: float
    length_definition: str = LENGTH_DEFINITION


def figure_length(f: FigureAnnotation) -> float:
    """Vertical extent of the head-to-foot segment, in pixels."""
    return f.foot.y - f.head.y


def distance_below_horizon(f: FigureAnnotation, h: HorizonAnnotation) -> float:
    """Vertical offset of the feet below the horizon line, in pixels.

    Positive when the feet sit below the horizon; figures above it come out
    negative and take part in the regression as-is.
    """
    return f.foot.y - h.y_h


def size_gradient(
    doc: AnnotationDocument, human_length_m: float = DEFAULT_HUMAN_LENGTH_M
) -> SizeGradientResult:
    """Regress figure length on distance below the horizon.

    The fitted slope s gives the viewpoint height as 1/s figure lengths,
    i.e. human_length_m / s in meters.  A non-positive slope has no
    physical reading and raises NonPositiveSlopeError.
    """
    if doc.horizon is None:
        raise PreconditionError(f"{doc.meta.id}: no horizon annotation")
    if len(doc.figures) < 3:
        raise PreconditionError(
            f"{doc.meta.id}: need at least 3 figures, have {len(doc.figures)}"
        )
    xs = [distance_below_horizon(f, doc.horizon) for f in doc.figures]
    ys = [figure_length(f) for f in doc.figures]
    try:
        report = stats.ols(xs, ys)
    except stats.DegenerateInputError as e:
        raise PreconditionError(f"{doc.meta.id}: {e}") from None
    if report.slope <= 0:
        raise NonPositiveSlopeError(
            f"{doc.meta.id}: fitted slope {report.slope:.6g} is not positive; "
            f"figures do not shrink toward the horizon"
        )
    lengths = 1.0 / report.slope
    return SizeGradientResult(
        regression=report,
        viewpoint_height_lengths=lengths,
        viewpoint_height_m=human_length_m * lengths,
        n_figures=report.n,
        human_length_m=human_length_m,
    )
