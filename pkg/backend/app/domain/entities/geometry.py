import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from ..exceptions import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"Point2 requires finite coordinates, got ({self.x!r}, {self.y!r})")

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


ORIGIN = Point2(0.0, 0.0)


@dataclass(frozen=True)
class StandardRect:
    """The rectangle [0, length] x [0, height]"""
    length: float
    height: float

    def __post_init__(self):
        if not (self.length > 0 and self.height > 0):
            raise DomainError(
                f"StandardRect requires positive sides, got length={self.length!r}, height={self.height!r}"
            )
        if not (math.isfinite(self.length) and math.isfinite(self.height)):
            raise DomainError("StandardRect sides must be finite")

    @property
    def area(self) -> float:
        return self.length * self.height

    @property
    def aspect(self) -> float:
        return self.length / self.height

    @property
    def diameter(self) -> float:
        return math.hypot(self.length, self.height)


@dataclass(frozen=True)
class HalfRect:
    """Right half [L/2, L] x [0, height] of a standard rectangle"""
    parent: StandardRect

    @property
    def area(self) -> float:
        return 0.5 * self.parent.area

    @property
    def x_range(self) -> Tuple[float, float]:
        return (0.5 * self.parent.length, self.parent.length)

    def corners(self) -> np.ndarray:
        x0, x1 = self.x_range
        h = self.parent.height
        return np.array([[x0, 0.0], [x1, 0.0], [x1, h], [x0, h]], dtype=float)


@dataclass(frozen=True)
class Placement:
    """Counterclockwise rotation about the origin followed by a translation"""
    angle: float
    translation: Point2 = ORIGIN

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise DomainError(f"Placement angle must be finite, got {self.angle!r}")
        normalized = math.fmod(self.angle, TWO_PI)
        if normalized < 0:
            normalized += TWO_PI
        if normalized >= TWO_PI:
            normalized = 0.0
        object.__setattr__(self, "angle", normalized)

    def apply(self, points: np.ndarray) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        rotation = np.array([[c, -s], [s, c]])
        return points @ rotation.T + np.array([self.translation.x, self.translation.y])

    def inverse_apply(self, points: np.ndarray) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        rotation = np.array([[c, -s], [s, c]])
        shifted = np.asarray(points, dtype=float) - np.array([self.translation.x, self.translation.y])
        return shifted @ rotation


def _as_vertex_array(vertices: Union[np.ndarray, Iterable]) -> np.ndarray:
    rows = []
    for v in vertices:
        if isinstance(v, Point2):
            rows.append((v.x, v.y))
        else:
            rows.append((float(v[0]), float(v[1])))
    return np.array(rows, dtype=float).reshape(-1, 2)


def signed_area(vertices: np.ndarray) -> float:
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Counterclockwise convex polygon; collinear vertices are tolerated"""
    vertices: np.ndarray
    tolerance: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        array = _as_vertex_array(self.vertices)
        if array.shape[0] < 3:
            raise DomainError(f"ConvexPolygon needs at least 3 vertices, got {array.shape[0]}")
        if not np.all(np.isfinite(array)):
            raise DomainError("ConvexPolygon vertices must be finite")
        area = signed_area(array)
        if not area > 0:
            raise DomainError(f"ConvexPolygon must be counterclockwise with positive area, got {area!r}")
        edges = np.roll(array, -1, axis=0) - array
        nxt = np.roll(edges, -1, axis=0)
        turns = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
        scale = np.linalg.norm(edges, axis=1) * np.linalg.norm(nxt, axis=1)
        if np.any(turns < -self.tolerance * np.maximum(scale, np.finfo(float).tiny)):
            raise DomainError("ConvexPolygon vertices are not convex")
        array.setflags(write=False)
        object.__setattr__(self, "vertices", array)

    @classmethod
    def from_points(cls, points: Sequence) -> "ConvexPolygon":
        return cls(vertices=_as_vertex_array(points))

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        mins = self.vertices.min(axis=0)
        maxs = self.vertices.max(axis=0)
        return (float(mins[0]), float(mins[1]), float(maxs[0]), float(maxs[1]))

    @property
    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Vectorized closed containment; tol is an absolute distance slack"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        start, end = self.edges
        edge = end - start
        lengths = np.linalg.norm(edge, axis=1)
        rel = pts[:, None, :] - start[None, :, :]
        cross = edge[None, :, 0] * rel[:, :, 1] - edge[None, :, 1] * rel[:, :, 0]
        return np.all(cross >= -tol * lengths[None, :], axis=1)


@dataclass(frozen=True)
class Disk:
    center: Point2
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"Disk radius must be positive, got {self.radius!r}")

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius

    def scaled(self, factor: float) -> "Disk":
        return Disk(Point2(self.center.x * factor, self.center.y * factor), self.radius * factor)


class AreaMethod(str, Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    method: AreaMethod = AreaMethod.EXACT
    std_error: float = 0.0

    def __post_init__(self):
        if not self.value >= 0:
            raise DomainError(f"AreaEstimate value must be >= 0, got {self.value!r}")
        if not self.std_error >= 0:
            raise DomainError(f"AreaEstimate std_error must be >= 0, got {self.std_error!r}")
        if self.method == AreaMethod.EXACT and self.std_error != 0:
            raise DomainError("Exact area estimates carry no standard error")

    def agrees_with(self, other: "AreaEstimate", sigmas: float = 3.0) -> bool:
        spread = sigmas * math.hypot(self.std_error, other.std_error)
        return abs(self.value - other.value) <= spread
