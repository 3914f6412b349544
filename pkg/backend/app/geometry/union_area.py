"""
Area of a union of convex polygons.

Exact method: vertical sweep. Breakpoints are all vertex abscissae plus all
edge-edge crossings, so inside each slab every polygon's vertical section is an
interval whose ends move linearly and never swap order with other ends; the
union length is therefore linear on the slab and the midpoint rule is exact.

Monte Carlo method: uniform samples over the joint bounding box, seeded.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..config.workbench_constants import GEOMETRY_TOL, MC_CHUNK, MIN_MC_SAMPLES
from ..domain.entities.geometry import AreaEstimate, AreaMethod, ConvexPolygon
from ..domain.exceptions import DomainError, UnionBoundsError
from .polygon_ops import point_in_polygons

logger = logging.getLogger(__name__)


def _edge_arrays(polygons: Sequence[ConvexPolygon]):
    starts = np.concatenate([p.vertices for p in polygons])
    ends = np.concatenate([np.roll(p.vertices, -1, axis=0) for p in polygons])
    return starts, ends


def _crossing_abscissae(starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    r = ends - starts
    i, j = np.triu_indices(starts.shape[0], k=1)
    p, q = starts[i], starts[j]
    rp, rq = r[i], r[j]
    denom = rp[:, 0] * rq[:, 1] - rp[:, 1] * rq[:, 0]
    qp = q - p
    ok = denom != 0
    safe = np.where(ok, denom, 1.0)
    t = (qp[:, 0] * rq[:, 1] - qp[:, 1] * rq[:, 0]) / safe
    u = (qp[:, 0] * rp[:, 1] - qp[:, 1] * rp[:, 0]) / safe
    hit = ok & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
    return p[hit, 0] + t[hit] * rp[hit, 0]


def _sections(polygon: ConvexPolygon, xs: np.ndarray):
    """Lower and upper ends of the vertical section at each abscissa (inf/-inf when empty)"""
    a = polygon.vertices
    b = np.roll(a, -1, axis=0)
    xa, xb = a[:, 0], b[:, 0]
    lo_x = np.minimum(xa, xb)
    hi_x = np.maximum(xa, xb)
    span = (xs[:, None] > lo_x[None, :]) & (xs[:, None] < hi_x[None, :])
    dx = np.where(xb != xa, xb - xa, 1.0)
    t = (xs[:, None] - xa[None, :]) / dx[None, :]
    y = a[None, :, 1] + t * (b[None, :, 1] - a[None, :, 1])
    lower = np.where(span, y, np.inf).min(axis=1)
    upper = np.where(span, y, -np.inf).max(axis=1)
    empty = ~np.any(span, axis=1)
    lower = np.where(empty, np.inf, lower)
    upper = np.where(empty, -np.inf, upper)
    return lower, upper


def exact_union_area(polygons: Sequence[ConvexPolygon]) -> float:
    starts, ends = _edge_arrays(polygons)
    breaks = np.concatenate([starts[:, 0], _crossing_abscissae(starts, ends)])
    xs = np.unique(breaks)
    widths = np.diff(xs)
    keep = widths > 0
    if not np.any(keep):
        return 0.0
    mids = 0.5 * (xs[:-1] + xs[1:])[keep]
    widths = widths[keep]

    lows = np.empty((mids.size, len(polygons)))
    highs = np.empty_like(lows)
    for idx, polygon in enumerate(polygons):
        lows[:, idx], highs[:, idx] = _sections(polygon, mids)

    order = np.argsort(lows, axis=1)
    lows = np.take_along_axis(lows, order, axis=1)
    highs = np.take_along_axis(highs, order, axis=1)
    reach = np.maximum.accumulate(highs, axis=1)
    previous = np.concatenate([np.full((mids.size, 1), -np.inf), reach[:, :-1]], axis=1)
    with np.errstate(invalid="ignore"):
        pieces = highs - np.maximum(lows, previous)
    pieces = np.where(np.isfinite(pieces) & (pieces > 0), pieces, 0.0)
    return float(np.dot(widths, pieces.sum(axis=1)))


def _joint_bounds(polygons: Sequence[ConvexPolygon]):
    boxes = np.array([p.bounds for p in polygons])
    return boxes[:, 0].min(), boxes[:, 1].min(), boxes[:, 2].max(), boxes[:, 3].max()


def monte_carlo_area(polygons: Sequence[ConvexPolygon], samples: int, seed: int,
                     clip: Optional[Sequence[ConvexPolygon]] = None) -> AreaEstimate:
    """
    Seeded estimate of |union(polygons)|, or of |union(polygons) ∩ union(clip)|
    when `clip` is given. Samples are drawn over the joint bounding box in chunks.
    """
    if samples < MIN_MC_SAMPLES:
        raise DomainError(f"Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}")
    x0, y0, x1, y1 = _joint_bounds(polygons)
    box_area = (x1 - x0) * (y1 - y0)
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = samples
    while remaining > 0:
        n = min(remaining, MC_CHUNK)
        pts = np.column_stack([rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
        inside = point_in_polygons(pts, polygons)
        if clip is not None:
            inside &= point_in_polygons(pts, clip)
        hits += int(np.count_nonzero(inside))
        remaining -= n
    fraction = hits / samples
    std = box_area * math.sqrt(fraction * (1.0 - fraction) / samples)
    return AreaEstimate(box_area * fraction, AreaMethod.MONTE_CARLO, std)


def union_area(polygons: Sequence[ConvexPolygon], method: AreaMethod = AreaMethod.EXACT,
               samples: Optional[int] = None, seed: Optional[int] = None) -> AreaEstimate:
    if not polygons:
        raise DomainError("union_area needs a nonempty list of polygons")
    method = AreaMethod(method)
    if method == AreaMethod.MONTE_CARLO:
        if samples is None or seed is None:
            raise DomainError("Monte Carlo union needs explicit samples and seed")
        return monte_carlo_area(polygons, samples, seed)
    value = exact_union_area(polygons)
    areas = [p.area for p in polygons]
    lower, upper = max(areas), sum(areas)
    slack = GEOMETRY_TOL * upper
    if value < lower - slack or value > upper + slack:
        raise UnionBoundsError(value, lower, upper)
    logger.debug("Exact union of %d polygons: %.17g", len(polygons), value)
    return AreaEstimate(value, AreaMethod.EXACT)


def monte_carlo_intersection_area(p: ConvexPolygon, q: ConvexPolygon, samples: int, seed: int) -> AreaEstimate:
    return monte_carlo_area([p], samples, seed, clip=[q])
