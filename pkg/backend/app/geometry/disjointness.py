"""
Disjointness of rotated right halves (Lemma 1 predicate) and its proof point
"""

import math
from typing import Dict

from ..config.workbench_constants import GEOMETRY_TOL
from ..domain.entities.geometry import Placement, Point2, StandardRect
from ..domain.exceptions import DegenerateAspectError, DomainError
from .polygon_ops import half_rect_polygon, intersection_area

HALF_PI = 0.5 * math.pi


def disjointness_threshold(rect: StandardRect) -> float:
    """1 / sqrt((L/l)^2 / 4 - 1); requires 2l < L"""
    if not 2.0 * rect.height < rect.length:
        raise DegenerateAspectError(rect.length, rect.height)
    return 1.0 / math.sqrt(0.25 * rect.aspect * rect.aspect - 1.0)


def minimal_aspect_for_gap(gap: float) -> float:
    """Smallest L/l whose threshold is met by tan(gap): 2 / sin(gap)"""
    if not (0.0 < gap < HALF_PI):
        raise DomainError(f"Angle gap must lie in (0, pi/2), got {gap!r}")
    return 2.0 / math.sin(gap)


def _check_angles(vartheta: float, theta: float) -> None:
    if not (0.0 <= vartheta < theta < HALF_PI):
        raise DomainError(
            f"Lemma 1 needs 0 <= vartheta < theta < pi/2, got vartheta={vartheta!r}, theta={theta!r}"
        )


def lemma1_disjoint(rect: StandardRect, vartheta: float, theta: float, rel_tol: float = GEOMETRY_TOL) -> bool:
    """
    True iff tan(theta - vartheta) meets the threshold (up to rel_tol).

    Sufficient only: False does not assert that the halves overlap.
    """
    _check_angles(vartheta, theta)
    threshold = disjointness_threshold(rect)
    return math.tan(theta - vartheta) >= threshold * (1.0 - rel_tol)


def half_overlap(rect: StandardRect, vartheta: float, theta: float) -> float:
    """Exact area of r_vartheta Q_+ ∩ r_theta Q_+"""
    first = half_rect_polygon(rect, Placement(vartheta))
    second = half_rect_polygon(rect, Placement(theta))
    return intersection_area(first, second).value


def lemma1_proof_point(rect: StandardRect, theta: float) -> Point2:
    """Point where y = x tan(theta) meets y = l"""
    if not (0.0 < theta < HALF_PI):
        raise DomainError(f"theta must lie in (0, pi/2), got {theta!r}")
    return Point2(rect.height / math.tan(theta), rect.height)


def lemma1_proof_bounds(rect: StandardRect, theta: float, rel_tol: float = GEOMETRY_TOL) -> Dict[str, float]:
    """x0 <= L/2 and |(x0, y0)| <= L/2 whenever the predicate holds (with vartheta = 0)"""
    point = lemma1_proof_point(rect, theta)
    half_length = 0.5 * rect.length
    return {
        "x0": point.x,
        "y0": point.y,
        "norm": point.norm(),
        "half_length": half_length,
        "x0_ok": point.x <= half_length * (1.0 + rel_tol),
        "norm_ok": point.norm() <= half_length * (1.0 + rel_tol),
    }
