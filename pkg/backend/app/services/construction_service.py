"""
Construction service
Lemma 2 levels, the nested family of Proposition 2 with its witness sets,
and the Remark family built without a growth condition.

All geometry is evaluated in the level frame where L_k = 1; absolute
dimensions are carried in log scale on each LevelConstruction.
"""

import itertools
import logging
import math
from typing import Any, Dict, List, Optional, Sequence

from ..config.workbench_constants import (
    COINCIDENT_ANGLE_TOL, GEOMETRY_TOL, K_CAP, REMARK_SAFETY_FACTOR, SLACK_TOL
)
from ..domain.entities.construction import (
    ConstructionConstants, LevelConstruction, NestedFamily, Prop2Witness
)
from ..domain.entities.geometry import (
    AreaMethod, ConvexPolygon, Disk, ORIGIN, Placement, StandardRect
)
from ..domain.entities.lacunary import SlopeWindow
from ..domain.exceptions import ConstructionError, DomainError
from ..geometry import (
    disk_polygon_area, half_overlap, lemma1_disjoint, minimal_aspect_for_gap, place_rect, union_area
)

logger = logging.getLogger(__name__)


def placed_rects(level: LevelConstruction, rect: Optional[StandardRect] = None) -> List[ConvexPolygon]:
    """r_theta Q_k for every angle of the level, in the normalized frame by default"""
    rect = rect or level.normalized_rect
    return [place_rect(rect, Placement(theta)) for theta in level.angles]


class ConstructionService:
    """Builds and verifies rectangle levels and families"""

    @staticmethod
    def constants(lam: float, mu: float, m0: float) -> ConstructionConstants:
        if not (0.0 < lam < mu < 1.0):
            raise DomainError(f"Constants need 0 < lambda < mu < 1, got ({lam!r}, {mu!r})")
        if not (0.0 < m0 <= 1.0):
            raise DomainError(f"Constants need 0 < m0 <= 1, got {m0!r}")
        c = 1.0 / ((1.0 / mu - 1.0) * m0)
        d = math.sqrt(4.0 + c * c)
        kappa = c / (2.0 * math.pi)
        kappa_prime = math.pi / (4.0 * d)
        c1 = 2.0 * math.log(1.0 / lam) / (kappa * kappa_prime)
        return ConstructionConstants(
            c=c, d=d, kappa=kappa, kappa_prime=kappa_prime, c1=c1, m0=m0, lam=lam, mu=mu
        )

    @classmethod
    def constants_for_window(cls, window: SlopeWindow) -> ConstructionConstants:
        return cls.constants(window.lam, window.mu, window.m0)

    @staticmethod
    def build_level(k: int, epsilon: float, window: SlopeWindow, consts: ConstructionConstants,
                    log_epsilon: Optional[float] = None) -> LevelConstruction:
        """L_k = epsilon, l_k = L_k / aspect, angles theta_{j0} .. theta_{j0+k-1}"""
        if k < 1:
            raise DomainError(f"Lemma 2 levels start at k = 1, got {k}")
        if log_epsilon is None:
            if not epsilon > 0:
                raise DomainError(f"Size cap epsilon must be positive, got {epsilon!r}")
            log_epsilon = math.log(epsilon)
        if k > window.size:
            raise ConstructionError(f"Level {k} needs {k} validated angles, the window has {window.size}")

        aspect = consts.aspect(k)
        if aspect < 2.0:
            raise ConstructionError(f"Aspect {aspect!r} < 2 at level {k}")
        log_height = log_epsilon - math.log(aspect)
        level = LevelConstruction(
            k=k,
            aspect=aspect,
            angles=window.angles(k),
            epsilon=epsilon,
            length=math.exp(log_epsilon),
            height=math.exp(log_height),
            log_length=log_epsilon,
            log_height=log_height,
        )
        logger.debug("Level %d: aspect=%.17g, log L=%.6f", k, aspect, log_epsilon)
        return level

    @staticmethod
    def aspect_sandwich(level: LevelConstruction, consts: ConstructionConstants,
                        rel_tol: float = GEOMETRY_TOL) -> Dict[str, Any]:
        """(i) 2 l_k <= L_k <= eps and (ii) c lam^-k <= L_k / l_k <= d lam^-k"""
        lam_inv_k = consts.lam ** (-level.k)
        lower = consts.c * lam_inv_k
        upper = consts.d * lam_inv_k
        formula = math.sqrt(4.0 + lam_inv_k * lam_inv_k * consts.c * consts.c)
        size_ok = 2.0 * level.height <= level.length <= level.epsilon
        return {
            "aspect": level.aspect,
            "lower": lower,
            "upper": upper,
            "formula": formula,
            "size_ok": size_ok,
            "lower_ok": lower <= level.aspect * (1.0 + rel_tol),
            "upper_ok": level.aspect <= upper * (1.0 + rel_tol),
            "formula_ok": math.isclose(level.aspect, formula, rel_tol=rel_tol),
            "identity_ok": math.isclose(
                level.aspect * consts.lam ** level.k,
                math.sqrt(4.0 * consts.lam ** (2 * level.k) + consts.c * consts.c),
                rel_tol=rel_tol,
            ),
        }

    @staticmethod
    def pairwise_half_overlaps(level: LevelConstruction, tol: float = GEOMETRY_TOL) -> Dict[str, Any]:
        """Exact half-rect overlaps for every angle pair of the level"""
        rect = level.normalized_rect
        half_area = 0.5 * rect.area
        pairs = []
        for first, second in itertools.combinations(level.angles, 2):
            low, high = min(first, second), max(first, second)
            overlap = half_overlap(rect, low, high)
            pairs.append({
                "vartheta": low,
                "theta": high,
                "overlap": overlap,
                "predicate": lemma1_disjoint(rect, low, high),
            })
        worst = max((p["overlap"] for p in pairs), default=0.0)
        return {
            "pairs": pairs,
            "max_overlap_ratio": worst / half_area,
            "disjoint": worst <= tol * half_area,
            "predicate_all": all(p["predicate"] for p in pairs),
        }

    @classmethod
    def verify_lemma2_iii(cls, level: LevelConstruction, mc_samples: Optional[int] = None,
                          seed: Optional[int] = None, tol: float = GEOMETRY_TOL) -> Dict[str, Any]:
        """Half-rect disjointness and |union r_theta Q_k| >= (k/2)|Q_k| in the normalized frame"""
        overlaps = cls.pairwise_half_overlaps(level, tol)
        polygons = placed_rects(level)
        exact = union_area(polygons)
        rect_area = level.normalized_rect.area
        bound = 0.5 * level.k * rect_area
        report = {
            "k": level.k,
            "pairs": len(overlaps["pairs"]),
            "max_overlap_ratio": overlaps["max_overlap_ratio"],
            "disjoint": overlaps["disjoint"],
            "union": exact.value,
            "bound": bound,
            "rect_area": rect_area,
            "slack": exact.value / bound - 1.0,
            "union_ok": exact.value > bound,
        }
        if mc_samples is not None:
            estimate = union_area(polygons, AreaMethod.MONTE_CARLO, samples=mc_samples, seed=seed)
            report.update({
                "mc_union": estimate.value,
                "mc_std": estimate.std_error,
                "mc_agrees": estimate.agrees_with(exact),
            })
        report["passed"] = report["disjoint"] and report["union_ok"] and report.get("mc_agrees", True)
        return report

    @staticmethod
    def gap_bound_report(window: SlopeWindow, consts: ConstructionConstants, k: int,
                         rel_tol: float = GEOMETRY_TOL) -> Dict[str, Any]:
        """tan(theta_j - theta_k) >= (m_j - m_k)/2 >= lam^k (1/mu - 1) m0 / 2 for all j < k"""
        if not (1 <= k < window.size):
            raise DomainError(f"Gap bound needs 1 <= k < {window.size}, got {k}")
        floor = 0.5 * consts.lam ** k * consts.gap_scale
        theta_k = window.angle(k)
        m_k = math.tan(theta_k)
        rows = []
        for j in range(k):
            theta_j = window.angle(j)
            tangent = math.tan(theta_j - theta_k)
            half_diff = 0.5 * (math.tan(theta_j) - m_k)
            rows.append({
                "j": j,
                "tan_gap": tangent,
                "half_slope_gap": half_diff,
                "first_ok": tangent >= half_diff * (1.0 - rel_tol),
                "second_ok": half_diff >= floor * (1.0 - rel_tol),
            })
        return {
            "k": k,
            "floor": floor,
            "rows": rows,
            "passed": all(r["first_ok"] and r["second_ok"] for r in rows),
        }

    @classmethod
    def build_nested_family(cls, k_max: int, window: SlopeWindow,
                            consts: ConstructionConstants) -> NestedFamily:
        """Level 1 with eps = 1, level k+1 with eps = min(l_k, 1/k)"""
        if k_max < 1:
            raise DomainError(f"Family size must be >= 1, got {k_max}")
        if k_max > K_CAP:
            raise ConstructionError(f"Family size {k_max} exceeds the cap of {K_CAP} levels")

        levels = [cls.build_level(1, 1.0, window, consts, log_epsilon=0.0)]
        for k in range(1, k_max):
            previous = levels[-1]
            log_epsilon = min(previous.log_height, -math.log(k))
            levels.append(cls.build_level(k + 1, math.exp(log_epsilon), window, consts, log_epsilon=log_epsilon))
        logger.info("Built nested family of %d levels (log L_K = %.3f)", k_max, levels[-1].log_length)
        return NestedFamily(levels=tuple(levels), first_index=1)

    @staticmethod
    def verify_total_order(family: NestedFamily, rel_tol: float = GEOMETRY_TOL) -> Dict[str, Any]:
        """Adjacent inclusion Q_{k+1} in Q_k and the shrinking diameters, all in log scale"""
        slack = math.log1p(rel_tol)
        rows = []
        for outer, inner in zip(family.levels, family.levels[1:]):
            cap = min(outer.log_height, -math.log(outer.k)) if outer.k >= 1 else outer.log_height
            rows.append({
                "k": outer.k,
                "length_ok": inner.log_length <= outer.log_length + slack,
                "height_ok": inner.log_height <= outer.log_height + slack,
                "cap_ok": inner.log_length <= cap + slack,
            })
        last = family.levels[-1]
        diameter_ok = True
        if last.k >= 2:
            diameter_ok = last.log_diameter < -math.log(last.k - 1)
        return {
            "rows": rows,
            "log_diameters": [level.log_diameter for level in family.levels],
            "diameter_ok": diameter_ok,
            "passed": diameter_ok and all(r["length_ok"] and r["height_ok"] and r["cap_ok"] for r in rows),
        }

    @staticmethod
    def witness(level: LevelConstruction, consts: ConstructionConstants,
                rel_tol: float = SLACK_TOL) -> Prop2Witness:
        """Theta_k = B(0, l_k) and Y_k = union of r_theta Q_k, with the Prop. 2 checks attached"""
        rect = level.normalized_rect
        theta_set = Disk(ORIGIN, rect.height)
        polygons = tuple(placed_rects(level))
        y_area = union_area(list(polygons))

        quarter = 0.25 * theta_set.area
        quarter_errors = [
            abs(disk_polygon_area(theta_set, polygon).value - quarter) / quarter for polygon in polygons
        ]
        bound = consts.kappa * level.k * consts.lam ** (-level.k) * theta_set.area
        checks = {
            "y_area": y_area.value,
            "theta_area": theta_set.area,
            "bound": bound,
            "slack": y_area.value / bound - 1.0,
            "density_ok": y_area.value > bound,
            "disk_area_ok": math.isclose(theta_set.area, math.pi * rect.height ** 2, rel_tol=GEOMETRY_TOL),
            "max_quarter_error": max(quarter_errors),
            "quarter_ok": max(quarter_errors) <= rel_tol,
        }
        checks["passed"] = checks["density_ok"] and checks["disk_area_ok"] and checks["quarter_ok"]
        return Prop2Witness(
            level=level,
            theta_set=theta_set,
            y_set=polygons,
            y_area=y_area,
            checks=checks,
        )

    @staticmethod
    def remark_aspect(angles: Sequence[float]) -> float:
        """1.01 * max(2, smallest aspect meeting the Lemma 1 threshold for every pair)"""
        needed = 2.0
        for first, second in itertools.combinations(angles, 2):
            needed = max(needed, minimal_aspect_for_gap(abs(first - second)))
        return REMARK_SAFETY_FACTOR * needed

    @classmethod
    def build_remark_family(cls, k_max: int, angles: Sequence[float]) -> NestedFamily:
        """
        Levels k = 0..K; level k uses theta_0..theta_k and nests inside level k-1.

        Only the Lemma 1 aspect predicate is checked here; exact pairwise
        half-rectangle overlaps are measured later by the remark suite.
        """
        if k_max < 0:
            raise DomainError(f"Remark family size must be >= 0, got {k_max}")
        if k_max > K_CAP:
            raise ConstructionError(f"Remark family size {k_max} exceeds the cap of {K_CAP} levels")
        angles = tuple(float(a) for a in angles)
        if len(angles) < k_max + 1:
            raise ConstructionError(f"Remark level {k_max} needs {k_max + 1} angles, got {len(angles)}")
        angles = angles[:k_max + 1]
        if any(not (0.0 < a < 0.5 * math.pi) for a in angles):
            raise DomainError("Remark angles must lie in (0, pi/2)")
        for first, second in itertools.combinations(angles, 2):
            if abs(first - second) <= COINCIDENT_ANGLE_TOL:
                raise ConstructionError(f"Angles {first!r} and {second!r} coincide")

        levels = []
        log_epsilon = 0.0
        for k in range(k_max + 1):
            level_angles = angles[:k + 1]
            aspect = cls.remark_aspect(level_angles)
            log_height = log_epsilon - math.log(aspect)
            level = LevelConstruction(
                k=k,
                aspect=aspect,
                angles=level_angles,
                epsilon=math.exp(log_epsilon),
                length=math.exp(log_epsilon),
                height=math.exp(log_height),
                log_length=log_epsilon,
                log_height=log_height,
            )
            rect = level.normalized_rect
            for first, second in itertools.combinations(level_angles, 2):
                if not lemma1_disjoint(rect, min(first, second), max(first, second)):
                    raise ConstructionError(f"Remark level {k} misses the disjointness threshold")
            levels.append(level)
            log_epsilon = min(log_height, -math.log(k + 1))
        logger.info("Built remark family of %d levels", k_max + 1)
        return NestedFamily(levels=tuple(levels), first_index=0)
