"""
SVG reproductions of the two construction figures.

fig1: Q, Q_+, r_theta Q and r_theta Q_+ for one level.
fig2: Theta_k, r_theta Q_k and their quarter-disk intersection (shaded).

Output is byte-stable: coordinates use fixed formatting and element ids are explicit.
"""

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, Tuple

import numpy as np
import svgwrite

from ..config.workbench_constants import FIGURE_FILES
from ..domain.entities.construction import LevelConstruction
from ..domain.entities.geometry import ConvexPolygon, Placement
from ..domain.exceptions import DomainError, OutputError
from ..geometry import clip_convex, half_rect_polygon, place_rect

logger = logging.getLogger(__name__)

CANVAS = 800
MARGIN = 40
STYLES = {
    "Q": {"fill": "none", "stroke": "black", "stroke_width": 2},
    "Q_plus": {"fill": "#4477aa", "fill_opacity": 0.35, "stroke": "#4477aa", "stroke_width": 1},
    "rQ": {"fill": "none", "stroke": "#cc3311", "stroke_width": 2},
    "rQ_plus": {"fill": "#cc3311", "fill_opacity": 0.35, "stroke": "#cc3311", "stroke_width": 1},
    "Theta": {"fill": "none", "stroke": "#228833", "stroke_width": 2},
    "intersection": {"fill": "#228833", "fill_opacity": 0.5, "stroke": "none"},
}


def _fmt(value: float) -> str:
    text = f"{value:.4f}"
    return "0.0000" if text == "-0.0000" else text


class _Viewport:
    """World box to canvas pixels, y pointing up"""

    def __init__(self, bounds: Tuple[float, float, float, float]):
        x0, y0, x1, y1 = bounds
        self.x0, self.y1 = x0, y1
        self.scale = (CANVAS - 2 * MARGIN) / max(x1 - x0, y1 - y0)

    def point(self, x: float, y: float) -> str:
        return f"{_fmt(MARGIN + (x - self.x0) * self.scale)},{_fmt(MARGIN + (self.y1 - y) * self.scale)}"

    def polygon_path(self, vertices: Iterable) -> str:
        points = [self.point(float(x), float(y)) for x, y in vertices]
        return "M " + " L ".join(points) + " Z"

    def length(self, value: float) -> str:
        return _fmt(value * self.scale)


def _bounds(polygons: Iterable[ConvexPolygon]) -> Tuple[float, float, float, float]:
    boxes = np.array([p.bounds for p in polygons])
    return float(boxes[:, 0].min()), float(boxes[:, 1].min()), float(boxes[:, 2].max()), float(boxes[:, 3].max())


def _drawing(path: Path) -> svgwrite.Drawing:
    dwg = svgwrite.Drawing(str(path), size=(CANVAS, CANVAS), profile="tiny")
    dwg.add(dwg.rect(insert=(0, 0), size=(CANVAS, CANVAS), fill="white", id="background"))
    return dwg


def _add_path(dwg: svgwrite.Drawing, name: str, d: str) -> None:
    dwg.add(dwg.path(d=d, id=name, **STYLES[name]))


def _save(dwg: svgwrite.Drawing, path: Path) -> None:
    try:
        dwg.save()
    except OSError as exc:
        raise OutputError(f"Cannot write figure {path}: {exc}") from exc


def figure1(level: LevelConstruction, theta: float, path: Path) -> Path:
    rect = level.normalized_rect
    shapes = {
        "Q": place_rect(rect, Placement(0.0)),
        "Q_plus": half_rect_polygon(rect, Placement(0.0)),
        "rQ": place_rect(rect, Placement(theta)),
        "rQ_plus": half_rect_polygon(rect, Placement(theta)),
    }
    view = _Viewport(_bounds(shapes.values()))
    dwg = _drawing(path)
    for name, polygon in shapes.items():
        _add_path(dwg, name, view.polygon_path(polygon.vertices))
    _save(dwg, path)
    return path


def figure2(level: LevelConstruction, theta: float, path: Path) -> Path:
    rect = level.normalized_rect
    radius = rect.height
    half_width = 1.6 * radius
    window = ConvexPolygon.from_points([
        (-half_width, -half_width), (half_width, -half_width),
        (half_width, half_width), (-half_width, half_width),
    ])
    visible = clip_convex(place_rect(rect, Placement(theta)), window)
    view = _Viewport(window.bounds)
    dwg = _drawing(path)

    r = view.length(radius)
    start = view.point(radius, 0.0)
    opposite = view.point(-radius, 0.0)
    _add_path(dwg, "Theta", f"M {start} A {r},{r} 0 1,0 {opposite} A {r},{r} 0 1,0 {start} Z")
    if visible is not None:
        _add_path(dwg, "rQ", view.polygon_path(visible))
    origin = view.point(0.0, 0.0)
    first = view.point(radius * math.cos(theta), radius * math.sin(theta))
    second = view.point(radius * math.cos(theta + 0.5 * math.pi), radius * math.sin(theta + 0.5 * math.pi))
    # Canvas y points down, so the counterclockwise world arc has sweep flag 0
    _add_path(dwg, "intersection", f"M {origin} L {first} A {r},{r} 0 0,0 {second} Z")
    _save(dwg, path)
    return path


def write_figures(level: LevelConstruction, out_dir: str) -> Dict[str, Path]:
    """fig1.svg and fig2.svg for the first angle of the level"""
    if not level.angles:
        raise DomainError("Figures need a level with at least one angle")
    target = Path(out_dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"Cannot create output directory {target}: {exc}") from exc
    theta = level.angles[0]
    fig1_name, fig2_name = FIGURE_FILES
    paths = {
        fig1_name: figure1(level, theta, target / fig1_name),
        fig2_name: figure2(level, theta, target / fig2_name),
    }
    logger.info("Wrote figures for level %d to %s", level.k, target)
    return paths
