"""
Validator for lacunary angle sequences
Finite-prefix surrogate of the bilacunarity envelope on the slopes m_j = tan(theta_j)
"""

import logging
import math
from typing import Any, Dict, List, Optional

from ..domain.entities.lacunary import LacunarySequence, SlopeWindow
from ..domain.exceptions import BilacunarityError, DomainError
from ..domain.schemas.report import RatioRecord, SlopeWindowReport

logger = logging.getLogger(__name__)


class LacunaryValidator:
    """Validates bilacunary prefixes and reports the reindexing point j0"""

    MIN_PREFIX = 2
    SLOPE_CAP = 1.0  # m_{j0} <= 1

    @classmethod
    def _prefix_slopes(cls, seq: LacunarySequence, prefix: int) -> List[float]:
        if prefix < cls.MIN_PREFIX:
            raise DomainError(f"Prefix must be >= {cls.MIN_PREFIX}, got {prefix}")
        if seq.length is not None and prefix > seq.length:
            raise DomainError(f"Prefix {prefix} exceeds the {seq.length} explicit angles")
        return [seq.slope(j) for j in range(prefix)]

    @classmethod
    def inspect(cls, seq: LacunarySequence, prefix: int, max_j0: Optional[int] = None) -> SlopeWindowReport:
        """Compute every ratio and the smallest admissible j0 without raising"""
        slopes = cls._prefix_slopes(seq, prefix)
        ratios = [
            RatioRecord(
                j=j,
                ratio=slopes[j + 1] / slopes[j],
                within_envelope=seq.lam <= slopes[j + 1] / slopes[j] <= seq.mu,
            )
            for j in range(prefix - 1)
        ]

        # Smallest j0 whose tail of ratios stays inside [lam, mu]
        tail_start = len(ratios)
        while tail_start > 0 and ratios[tail_start - 1].within_envelope:
            tail_start -= 1
        limit = prefix - 2 if max_j0 is None else min(max_j0, prefix - 2)
        j0 = None
        for candidate in range(tail_start, limit + 1):
            if slopes[candidate] <= cls.SLOPE_CAP:
                j0 = candidate
                break

        errors = []
        warnings = ["Finite prefix check; the asymptotic envelope is not certified beyond the prefix"]
        if j0 is None:
            violating = [f"j={r.j}: {r.ratio:.6g}" for r in ratios if not r.within_envelope]
            if tail_start > limit:
                errors.append(
                    f"No j0 <= {limit} with all ratios in [{seq.lam}, {seq.mu}]; violating ratios: "
                    + ", ".join(violating)
                )
            else:
                errors.append(f"No j0 in [{tail_start}, {limit}] with m_j0 <= {cls.SLOPE_CAP}")

        return SlopeWindowReport(
            valid=j0 is not None,
            j0=j0,
            prefix=prefix,
            lam=seq.lam,
            mu=seq.mu,
            m_j0=None if j0 is None else slopes[j0],
            slopes=slopes,
            ratios=ratios,
            errors=errors,
            warnings=warnings,
        )

    @classmethod
    def validate_bilacunary(cls, seq: LacunarySequence, prefix: int, max_j0: Optional[int] = None) -> SlopeWindow:
        """Smallest j0 such that all ratios in [j0, prefix) lie in [lam, mu] and m_j0 <= 1"""
        report = cls.inspect(seq, prefix, max_j0)
        if not report.valid:
            violations = [(r.j, r.ratio) for r in report.ratios if not r.within_envelope]
            raise BilacunarityError(report.errors[0], violations)
        logger.info("Validated prefix of %d angles: j0=%d, m_j0=%.6g", prefix, report.j0, report.m_j0)
        return SlopeWindow(
            sequence=seq,
            j0=report.j0,
            prefix=prefix,
            ratios=tuple(r.ratio for r in report.ratios),
        )

    @classmethod
    def tan_angle_consistency(cls, seq: LacunarySequence, prefix: int, angle_cap: float = 0.5,
                              upper: float = 1.2) -> Dict[str, Any]:
        """m_j / theta_j for theta_j < angle_cap: must lie in (1, upper] and decrease"""
        quotients = []
        for j in range(prefix):
            theta = seq.angle(j)
            if theta < angle_cap:
                quotients.append((j, math.tan(theta) / theta))
        values = [q for _, q in quotients]
        in_range = all(1.0 < q <= upper for q in values)
        decreasing = all(b < a for a, b in zip(values, values[1:]))
        return {
            "quotients": quotients,
            "in_range": in_range,
            "decreasing": decreasing,
            "valid": in_range and decreasing,
        }
