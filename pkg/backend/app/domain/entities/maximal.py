import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .geometry import Disk, Placement, StandardRect
from ..exceptions import DomainError


class OrliczKind(str, Enum):
    POWER = "power"
    LOGLIKE = "loglike"
    TABLE = "table"


@dataclass(frozen=True)
class OrliczFunction:
    """
    Convex nondecreasing Phi with Phi(0) = 0.

    power:   t**p, p >= 1
    loglike: t * (1 + log_+ t)**gamma, gamma >= 0 (gamma = 1 is Phi_0)
    table:   piecewise-linear interpolation of (t, Phi(t)) knots, extended
             linearly past the last knot
    """
    kind: OrliczKind
    p: float = 1.0
    gamma: float = 1.0
    table: Tuple[Tuple[float, float], ...] = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", OrliczKind(self.kind))
        if self.kind == OrliczKind.POWER and not self.p >= 1.0:
            raise DomainError(f"Power Orlicz functions need p >= 1, got {self.p!r}")
        if self.kind == OrliczKind.LOGLIKE and not self.gamma >= 0.0:
            raise DomainError(f"Loglike Orlicz functions need gamma >= 0, got {self.gamma!r}")
        if self.kind == OrliczKind.TABLE:
            knots = tuple((float(t), float(v)) for t, v in self.table)
            if len(knots) < 2:
                raise DomainError("Table Orlicz functions need at least two knots")
            if knots[0] != (0.0, 0.0):
                raise DomainError("Table Orlicz functions must start at (0, 0)")
            ts = np.array([t for t, _ in knots])
            vs = np.array([v for _, v in knots])
            if np.any(np.diff(ts) <= 0):
                raise DomainError("Table knots must have strictly increasing t")
            slopes = np.diff(vs) / np.diff(ts)
            if np.any(slopes < 0) or np.any(np.diff(slopes) < -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))):
                raise DomainError("Table Orlicz functions must be nondecreasing and convex")
            object.__setattr__(self, "table", knots)

    @classmethod
    def power(cls, p: float) -> "OrliczFunction":
        return cls(kind=OrliczKind.POWER, p=p)

    @classmethod
    def loglike(cls, gamma: float) -> "OrliczFunction":
        return cls(kind=OrliczKind.LOGLIKE, gamma=gamma)

    @classmethod
    def phi0(cls) -> "OrliczFunction":
        return cls(kind=OrliczKind.LOGLIKE, gamma=1.0)

    @classmethod
    def from_table(cls, knots) -> "OrliczFunction":
        return cls(kind=OrliczKind.TABLE, table=tuple(knots))

    @classmethod
    def parse(cls, spec: str) -> "OrliczFunction":
        """Parse `power:p` or `loglike:g`"""
        try:
            kind, value = spec.split(":", 1)
            number = float(value)
        except ValueError as exc:
            raise DomainError(f"Cannot parse Orlicz spec {spec!r}; use power:p or loglike:g") from exc
        kind = kind.strip().lower()
        if kind == OrliczKind.POWER.value:
            return cls.power(number)
        if kind == OrliczKind.LOGLIKE.value:
            return cls.loglike(number)
        raise DomainError(f"Unknown Orlicz kind {kind!r}; use power or loglike")

    @property
    def label(self) -> str:
        if self.kind == OrliczKind.POWER:
            return f"power:{self.p:g}"
        if self.kind == OrliczKind.LOGLIKE:
            return f"loglike:{self.gamma:g}"
        return f"table:{len(self.table)}"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError("Orlicz functions are defined on [0, inf)")
        if self.kind == OrliczKind.POWER:
            out = t ** self.p
        elif self.kind == OrliczKind.LOGLIKE:
            log_plus = np.log(np.maximum(t, 1.0))
            out = t * (1.0 + log_plus) ** self.gamma
        else:
            ts = np.array([k[0] for k in self.table])
            vs = np.array([k[1] for k in self.table])
            last_slope = (vs[-1] - vs[-2]) / (ts[-1] - ts[-2])
            out = np.where(t <= ts[-1], np.interp(t, ts, vs), vs[-1] + last_slope * (t - ts[-1]))
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CounterexampleFunction:
    """f = value * indicator of a disk"""
    value: float
    support: Disk

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise DomainError(f"Counterexample value must be positive and finite, got {self.value!r}")

    @property
    def l1_norm(self) -> float:
        return self.value * self.support.area

    def scaled(self, value_factor: float = 1.0, length_factor: float = 1.0) -> "CounterexampleFunction":
        return CounterexampleFunction(self.value * value_factor, self.support.scaled(length_factor))


@dataclass(frozen=True)
class GridSearch:
    """
    Translation search around x: anchors every step_fraction * height along both
    sides (at most max_steps per side), pruning radius window_multiplier * (diam + r)
    """
    step_fraction: float = 0.125
    window_multiplier: float = 1.0
    max_steps: int = 256

    def __post_init__(self):
        if not (0.0 < self.step_fraction <= 1.0):
            raise DomainError(f"step_fraction must lie in (0, 1], got {self.step_fraction!r}")
        if not self.window_multiplier >= 1.0:
            raise DomainError(f"window_multiplier must be >= 1, got {self.window_multiplier!r}")
        if self.max_steps < 1:
            raise DomainError("max_steps must be positive")


@dataclass(frozen=True)
class Certificate:
    """A placement of family rectangle `rect_index`"""
    rect_index: int
    placement: Placement


@dataclass(frozen=True)
class MaximalConfig:
    """
    Rectangles of the family expressed in one working frame, the allowed
    rotations (None for the axis-parallel operator), an optional translation
    grid and the construction certificates.
    """
    rects: Tuple[StandardRect, ...]
    rotations: Optional[Tuple[float, ...]] = None
    grid: Optional[GridSearch] = None
    certificates: Tuple[Certificate, ...] = ()

    def __post_init__(self):
        if not self.rects:
            raise DomainError("MaximalConfig needs at least one rectangle")
        allowed = (0.0,) if self.rotations is None else self.rotations
        for cert in self.certificates:
            if not (0 <= cert.rect_index < len(self.rects)):
                raise DomainError(f"Certificate references unknown rectangle {cert.rect_index}")
            if self.rotations is None and cert.placement.angle != 0.0:
                raise DomainError("Axis-parallel configurations only accept unrotated certificates")
            if self.rotations is not None and not any(
                math.isclose(cert.placement.angle, a, rel_tol=0.0, abs_tol=1e-15) for a in allowed
            ):
                raise DomainError(f"Certificate angle {cert.placement.angle!r} is not an allowed rotation")

    @property
    def angles(self) -> Tuple[float, ...]:
        return (0.0,) if self.rotations is None else self.rotations


class LevelSetMode(str, Enum):
    WITNESS_EXACT = "witness-exact"
    PIXEL_CERTIFIED = "pixel-certified"
    PLACEMENT_UNION = "placement-union"


@dataclass(frozen=True)
class LevelSetEstimate:
    alpha: float
    measure: float
    mode: LevelSetMode
    resolution: Optional[int] = None
    certified_points: int = 0
    min_certified_value: Optional[float] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"Level-set threshold must be positive, got {self.alpha!r}")
        if not self.measure >= 0:
            raise DomainError(f"Level-set measure must be >= 0, got {self.measure!r}")
