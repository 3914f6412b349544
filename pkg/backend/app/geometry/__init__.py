# Convex geometry package
from .polygon_ops import place_rect, half_rect_polygon, intersection_area, clip_convex, point_in_polygons
from .union_area import union_area, monte_carlo_area, monte_carlo_intersection_area
from .disk_area import disk_polygon_area, disk_polygon_areas, disk_edge_areas
from .disjointness import (
    disjointness_threshold, lemma1_disjoint, half_overlap, lemma1_proof_point,
    lemma1_proof_bounds, minimal_aspect_for_gap
)

__all__ = [
    "place_rect", "half_rect_polygon", "intersection_area", "clip_convex", "point_in_polygons",
    "union_area", "monte_carlo_area", "monte_carlo_intersection_area",
    "disk_polygon_area", "disk_polygon_areas", "disk_edge_areas",
    "disjointness_threshold", "lemma1_disjoint", "half_overlap", "lemma1_proof_point",
    "lemma1_proof_bounds", "minimal_aspect_for_gap",
]
