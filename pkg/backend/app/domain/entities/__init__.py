# Import all entities to make them available for import
from .geometry import (
    Point2, ORIGIN, StandardRect, HalfRect, Placement, ConvexPolygon, Disk,
    AreaMethod, AreaEstimate
)
from .lacunary import LacunarySequence, SlopeWindow
from .construction import ConstructionConstants, LevelConstruction, NestedFamily, Prop2Witness
from .maximal import (
    OrliczKind, OrliczFunction, CounterexampleFunction, GridSearch, Certificate,
    MaximalConfig, LevelSetMode, LevelSetEstimate
)

__all__ = [
    # Geometry
    "Point2", "ORIGIN", "StandardRect", "HalfRect", "Placement", "ConvexPolygon", "Disk",
    "AreaMethod", "AreaEstimate",

    # Lacunary sequences
    "LacunarySequence", "SlopeWindow",

    # Construction
    "ConstructionConstants", "LevelConstruction", "NestedFamily", "Prop2Witness",

    # Maximal operators
    "OrliczKind", "OrliczFunction", "CounterexampleFunction", "GridSearch", "Certificate",
    "MaximalConfig", "LevelSetMode", "LevelSetEstimate",
]
