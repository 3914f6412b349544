"""
Exact area of a disk intersected with convex polygons.

Each directed edge a -> b contributes the signed area of disk ∩ triangle(center, a, b):
the part of the edge inside the circle contributes a triangle, the parts outside
contribute circular sectors. Summing over a counterclockwise boundary gives the
area of disk ∩ polygon. The kernel is vectorized over stacks of polygons.
"""

import logging

import numpy as np

from ..domain.entities.geometry import AreaEstimate, AreaMethod, ConvexPolygon, Disk

logger = logging.getLogger(__name__)


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]


def _sector(u: np.ndarray, v: np.ndarray, radius: float) -> np.ndarray:
    return 0.5 * radius * radius * np.arctan2(_cross(u, v), _dot(u, v))


def disk_edge_areas(a: np.ndarray, b: np.ndarray, radius: float) -> np.ndarray:
    """Signed areas of disk(0, radius) ∩ triangle(0, a, b) for stacked edges (..., 2)"""
    d = b - a
    dd = _dot(d, d)
    safe_dd = np.where(dd > 0, dd, 1.0)
    half_b = _dot(a, d) / safe_dd
    c = (_dot(a, a) - radius * radius) / safe_dd
    disc = half_b * half_b - c
    root = np.sqrt(np.maximum(disc, 0.0))
    t1 = np.where(disc > 0, np.clip(-half_b - root, 0.0, 1.0), 0.0)
    t2 = np.where(disc > 0, np.clip(-half_b + root, 0.0, 1.0), 0.0)
    p1 = a + t1[..., None] * d
    p2 = a + t2[..., None] * d
    area = _sector(a, p1, radius) + 0.5 * _cross(p1, p2) + _sector(p2, b, radius)
    return np.where(dd > 0, area, 0.0)


def disk_polygon_areas(disk: Disk, vertices: np.ndarray) -> np.ndarray:
    """Areas of disk ∩ polygon for a stack of counterclockwise vertex arrays (n, m, 2)"""
    shifted = np.asarray(vertices, dtype=float) - np.array([disk.center.x, disk.center.y])
    start = shifted
    end = np.roll(shifted, -1, axis=-2)
    areas = disk_edge_areas(start, end, disk.radius).sum(axis=-1)
    return np.clip(areas, 0.0, disk.area)


def disk_polygon_area(disk: Disk, polygon: ConvexPolygon) -> AreaEstimate:
    value = float(disk_polygon_areas(disk, polygon.vertices[None, :, :])[0])
    return AreaEstimate(min(value, polygon.area), AreaMethod.EXACT)
