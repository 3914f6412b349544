import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..exceptions import DomainError

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class LacunarySequence:
    """
    Angle generator theta_j with a bilacunarity envelope (lam, mu).

    Geometric sequences return theta0 * sigma**j; explicit sequences return
    the stored values and are limited to their length.
    """
    theta0: float
    lam: float
    mu: float
    sigma: Optional[float] = None
    explicit: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if not (0.0 < self.lam < self.mu < 1.0):
            raise DomainError(f"Envelope requires 0 < lambda < mu < 1, got ({self.lam!r}, {self.mu!r})")
        if not (0.0 < self.theta0 < HALF_PI):
            raise DomainError(f"theta0 must lie in (0, pi/2), got {self.theta0!r}")
        if (self.sigma is None) == (self.explicit is None):
            raise DomainError("Exactly one of sigma (geometric) or explicit angles must be given")
        if self.sigma is not None and not (0.0 < self.sigma < 1.0):
            raise DomainError(f"sigma must lie in (0, 1), got {self.sigma!r}")
        if self.explicit is not None:
            angles = tuple(float(a) for a in self.explicit)
            if len(angles) < 2:
                raise DomainError("Explicit sequences need at least two angles")
            if any(not (0.0 < a < HALF_PI) for a in angles):
                raise DomainError("Explicit angles must lie in (0, pi/2)")
            if any(b >= a for a, b in zip(angles, angles[1:])):
                raise DomainError("Explicit angles must be strictly decreasing")
            if angles[0] != self.theta0:
                raise DomainError("theta0 must equal the first explicit angle")
            object.__setattr__(self, "explicit", angles)

    @classmethod
    def geometric(cls, theta0: float, sigma: float, lam: float, mu: float) -> "LacunarySequence":
        return cls(theta0=theta0, lam=lam, mu=mu, sigma=sigma)

    @classmethod
    def from_angles(cls, angles, lam: float, mu: float) -> "LacunarySequence":
        angles = tuple(float(a) for a in angles)
        if not angles:
            raise DomainError("Explicit sequences need at least two angles")
        return cls(theta0=angles[0], lam=lam, mu=mu, explicit=angles)

    @property
    def is_geometric(self) -> bool:
        return self.sigma is not None

    @property
    def length(self) -> Optional[int]:
        return None if self.explicit is None else len(self.explicit)

    def angle(self, j: int) -> float:
        if j < 0:
            raise DomainError(f"Angle index must be >= 0, got {j}")
        if self.explicit is not None:
            if j >= len(self.explicit):
                raise DomainError(f"Angle index {j} out of range for {len(self.explicit)} explicit angles")
            return self.explicit[j]
        return self.theta0 * self.sigma ** j

    def slope(self, j: int) -> float:
        return math.tan(self.angle(j))


@dataclass(frozen=True)
class SlopeWindow:
    """Validated prefix of the slope sequence m_j = tan(theta_j), reindexed at j0"""
    sequence: LacunarySequence
    j0: int
    prefix: int
    ratios: Tuple[float, ...] = field(repr=False)

    @property
    def lam(self) -> float:
        return self.sequence.lam

    @property
    def mu(self) -> float:
        return self.sequence.mu

    @property
    def size(self) -> int:
        """Number of validated angles from j0 on"""
        return self.prefix - self.j0

    @property
    def m0(self) -> float:
        return self.sequence.slope(self.j0)

    def slope(self, j: int) -> float:
        return self.sequence.slope(j)

    def angle(self, i: int) -> float:
        """Reindexed angle theta_{j0 + i}"""
        if i < 0 or i >= self.size:
            raise DomainError(f"Reindexed angle {i} outside the validated window of {self.size}")
        return self.sequence.angle(self.j0 + i)

    def angles(self, count: int) -> Tuple[float, ...]:
        return tuple(self.angle(i) for i in range(count))

    def ratio_sandwich(self, j: int, k: int, rel_tol: float = 1e-12) -> bool:
        """lam^(k-j) m_j <= m_k <= mu^(k-j) m_j for j0 <= j < k < prefix"""
        if not (self.j0 <= j < k < self.prefix):
            raise DomainError(f"Sandwich indices must satisfy {self.j0} <= j < k < {self.prefix}")
        m_j, m_k = self.slope(j), self.slope(k)
        lower = self.lam ** (k - j) * m_j
        upper = self.mu ** (k - j) * m_j
        return lower * (1.0 - rel_tol) <= m_k <= upper * (1.0 + rel_tol)
