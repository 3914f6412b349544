import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .geometry import AreaEstimate, ConvexPolygon, Disk, StandardRect
from ..exceptions import DomainError


@dataclass(frozen=True)
class ConstructionConstants:
    """Constants c, d, kappa, kappa', c1 derived from (lam, mu, m0)"""
    c: float
    d: float
    kappa: float
    kappa_prime: float
    c1: float
    m0: float
    lam: float
    mu: float

    @property
    def gap_scale(self) -> float:
        """(1/mu - 1) * m0, the inverse of c"""
        return (1.0 / self.mu - 1.0) * self.m0

    def aspect(self, k: int) -> float:
        """L_k / l_k = lam^-k * sqrt(4 lam^2k + c^2)"""
        lam_k = self.lam ** k
        return math.sqrt(4.0 * lam_k * lam_k + self.c * self.c) / lam_k


@dataclass(frozen=True)
class LevelConstruction:
    """
    Output of the Lemma 2 construction for one level.

    Dimensions are carried in absolute units and in log scale; geometry is
    evaluated on `normalized_rect`, the level frame where L_k = 1.
    """
    k: int
    aspect: float
    angles: Tuple[float, ...]
    epsilon: float
    length: float
    height: float
    log_length: float
    log_height: float

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"Level index must be >= 0, got {self.k}")
        if not self.aspect >= 2.0:
            raise DomainError(f"Level aspect must be >= 2, got {self.aspect!r}")

    @property
    def normalized_rect(self) -> StandardRect:
        return StandardRect(1.0, 1.0 / self.aspect)

    @property
    def log_diameter(self) -> float:
        return self.log_length + 0.5 * math.log1p(1.0 / (self.aspect * self.aspect))


@dataclass(frozen=True)
class NestedFamily:
    """Levels ordered by index; Q_{k+1} is contained in Q_k"""
    levels: Tuple[LevelConstruction, ...]
    first_index: int = 1

    def __post_init__(self):
        if not self.levels:
            raise DomainError("A nested family needs at least one level")
        expected = tuple(range(self.first_index, self.first_index + len(self.levels)))
        if tuple(level.k for level in self.levels) != expected:
            raise DomainError("Family levels must be consecutive starting at first_index")

    @property
    def size(self) -> int:
        return len(self.levels)

    @property
    def last_index(self) -> int:
        return self.first_index + len(self.levels) - 1

    def level(self, k: int) -> LevelConstruction:
        index = k - self.first_index
        if index < 0 or index >= len(self.levels):
            raise DomainError(f"Level {k} not in family [{self.first_index}, {self.last_index}]")
        return self.levels[index]


@dataclass(frozen=True, eq=False)
class Prop2Witness:
    """Theta_k disk and Y_k polygons, materialized in the level frame (L_k = 1)"""
    level: LevelConstruction
    theta_set: Disk
    y_set: Tuple[ConvexPolygon, ...]
    y_area: AreaEstimate
    checks: Optional[dict] = field(default=None, compare=False)
