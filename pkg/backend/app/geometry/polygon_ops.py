"""
Placement and clipping of convex polygons
Sutherland-Hodgman clipping against a convex clip window, shoelace areas
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..domain.entities.geometry import (
    AreaEstimate, AreaMethod, ConvexPolygon, HalfRect, Placement, StandardRect, signed_area
)

logger = logging.getLogger(__name__)


def rect_corners(rect: StandardRect) -> np.ndarray:
    return np.array(
        [[0.0, 0.0], [rect.length, 0.0], [rect.length, rect.height], [0.0, rect.height]],
        dtype=float,
    )


def place_rect(rect: StandardRect, placement: Placement) -> ConvexPolygon:
    """r_theta([0, L] x [0, l]) + translation, counterclockwise from the placed origin corner"""
    return ConvexPolygon(vertices=placement.apply(rect_corners(rect)))


def half_rect_polygon(rect: StandardRect, placement: Placement) -> ConvexPolygon:
    """Placed right half Q_+ = [L/2, L] x [0, l]"""
    return ConvexPolygon(vertices=placement.apply(HalfRect(rect).corners()))


def _clip_vertices(subject: np.ndarray, window: np.ndarray) -> List[Tuple[float, float]]:
    output = [tuple(v) for v in subject]
    cp1 = window[-1]
    for cp2 in window:
        if not output:
            return []
        edge = cp2 - cp1

        def side(p):
            return edge[0] * (p[1] - cp1[1]) - edge[1] * (p[0] - cp1[0])

        inputs = output
        output = []
        s = inputs[-1]
        side_s = side(s)
        for e in inputs:
            side_e = side(e)
            if side_e >= 0:
                if side_s < 0:
                    output.append(_crossing(s, e, side_s, side_e))
                output.append(e)
            elif side_s >= 0:
                output.append(_crossing(s, e, side_s, side_e))
            s, side_s = e, side_e
        cp1 = cp2
    return output


def _crossing(s, e, side_s: float, side_e: float) -> Tuple[float, float]:
    t = side_s / (side_s - side_e)
    return (s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1]))


def clip_convex(subject: ConvexPolygon, window: ConvexPolygon) -> Optional[np.ndarray]:
    """Vertices of subject ∩ window, or None when the intersection is empty or degenerate"""
    vertices = _clip_vertices(subject.vertices, window.vertices)
    if len(vertices) < 3:
        return None
    array = np.array(vertices, dtype=float)
    if signed_area(array) <= 0:
        return None
    return array


def _canonical_pair(p: ConvexPolygon, q: ConvexPolygon) -> Tuple[ConvexPolygon, ConvexPolygon]:
    key_p = tuple(p.vertices.ravel().tolist())
    key_q = tuple(q.vertices.ravel().tolist())
    return (p, q) if key_p <= key_q else (q, p)


def _boxes_overlap(p: ConvexPolygon, q: ConvexPolygon) -> bool:
    px0, py0, px1, py1 = p.bounds
    qx0, qy0, qx1, qy1 = q.bounds
    return px0 <= qx1 and qx0 <= px1 and py0 <= qy1 and qy0 <= py1


def intersection_area(p: ConvexPolygon, q: ConvexPolygon) -> AreaEstimate:
    """Exact area of p ∩ q; arguments are ordered canonically so the result is symmetric"""
    if not _boxes_overlap(p, q):
        return AreaEstimate(0.0, AreaMethod.EXACT)
    first, second = _canonical_pair(p, q)
    clipped = clip_convex(first, second)
    if clipped is None:
        return AreaEstimate(0.0, AreaMethod.EXACT)
    value = min(max(signed_area(clipped), 0.0), p.area, q.area)
    return AreaEstimate(value, AreaMethod.EXACT)


def point_in_polygons(points: np.ndarray, polygons: Sequence[ConvexPolygon], tol: float = 0.0) -> np.ndarray:
    """Mask of points lying in at least one polygon"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    inside = np.zeros(pts.shape[0], dtype=bool)
    for polygon in polygons:
        x0, y0, x1, y1 = polygon.bounds
        candidates = ~inside & (pts[:, 0] >= x0 - tol) & (pts[:, 0] <= x1 + tol)
        candidates &= (pts[:, 1] >= y0 - tol) & (pts[:, 1] <= y1 + tol)
        if np.any(candidates):
            idx = np.flatnonzero(candidates)
            inside[idx] = polygon.contains(pts[idx], tol)
    return inside
