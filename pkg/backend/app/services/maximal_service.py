"""
Maximal operator service.

Lower bounds for M_S f(x) and M_{r_theta S} f(x) over constant-on-disk
functions, level-set measurements, and the Theorem 2 / Claim / Remark chains.
Every number returned is a certified lower bound: averages are exact areas of
explicitly enumerated placements.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..config.settings import settings
from ..config.workbench_constants import (
    DEFAULT_ALPHA_EXPONENTS, DEFAULT_CERTIFICATION_POINTS, DEFAULT_PIXEL_RESOLUTION, DEFAULT_SEED,
    GEOMETRY_TOL, SLACK_TOL, WEAK11_BUDGET, DIVERGENCE_GAIN_K, DIVERGENCE_GROWTH_FACTOR, DIVERGENCE_GROWTH_MIN_K,
)
from ..domain.entities.construction import ConstructionConstants, LevelConstruction, NestedFamily, Prop2Witness
from ..domain.entities.geometry import ConvexPolygon, Disk, ORIGIN, Placement, Point2, StandardRect
from ..domain.entities.maximal import (
    Certificate, CounterexampleFunction, GridSearch, LevelSetEstimate, LevelSetMode, MaximalConfig,
    OrliczFunction,
)
from ..domain.exceptions import CertificationError, DomainError
from ..geometry import disk_polygon_areas, place_rect, union_area
from ..geometry.polygon_ops import rect_corners
from .construction_service import ConstructionService, placed_rects
from .orlicz import PHI0, divergence_factors, divergence_ratio, is_little_o_of_phi0, orlicz_integral

logger = logging.getLogger(__name__)

FRAME_LOG_WINDOW = 200.0  # levels more than e^200 away from the frame are left out
MIN_PIXEL_SPAN = 4
PLACEMENT_CHUNK = 250_000


# ---------------------------------------------------------------------------
# Counterexample functions and frames
# ---------------------------------------------------------------------------

def theorem2_fk(level: LevelConstruction, consts: ConstructionConstants) -> CounterexampleFunction:
    """f_k = (lam^-k / kappa') * indicator of B(0, l_k)"""
    if level.k < 1:
        raise DomainError(f"Theorem 2 functions start at k = 1, got {level.k}")
    return CounterexampleFunction(consts.lam ** (-level.k) / consts.kappa_prime, Disk(ORIGIN, level.height))


def remark_fk(level: LevelConstruction) -> CounterexampleFunction:
    """f_k = |Q_k| * indicator of B(0, l_k) / |B(0, l_k)|, so ||f_k||_1 = |Q_k|"""
    return CounterexampleFunction(level.aspect / math.pi, Disk(ORIGIN, level.height))


def in_level_frame(f: CounterexampleFunction, level: LevelConstruction) -> CounterexampleFunction:
    """Rescale lengths so that L_k = 1; values are unchanged"""
    return f.scaled(length_factor=math.exp(-level.log_length))


def level_config(level: LevelConstruction, rotated: bool = True, grid: Optional[GridSearch] = None) -> MaximalConfig:
    """Single-level configuration in the normalized frame, certificates r_theta Q_k at the origin"""
    if rotated:
        certificates = tuple(Certificate(0, Placement(theta)) for theta in level.angles)
        rotations = tuple(level.angles)
    else:
        certificates = (Certificate(0, Placement(0.0)),)
        rotations = None
    return MaximalConfig(
        rects=(level.normalized_rect,),
        rotations=rotations,
        grid=grid,
        certificates=certificates,
    )


def certificate_placements(family: NestedFamily, rotated: bool,
                           indices: Optional[Sequence[int]] = None) -> Tuple[Certificate, ...]:
    """r_theta Q_k at translation 0 for every level (identity placements when axis-parallel)"""
    positions = range(family.size) if indices is None else indices
    certificates = []
    for position, level_pos in enumerate(positions):
        level = family.levels[level_pos]
        angles = level.angles if rotated else (0.0,)
        certificates.extend(Certificate(position, Placement(theta)) for theta in angles)
    return tuple(certificates)


def family_config(family: NestedFamily, log_scale: float, rotated: bool = False,
                  grid: Optional[GridSearch] = None) -> MaximalConfig:
    """Family rectangles divided by exp(log_scale); levels outside the frame window are omitted"""
    kept = [
        i for i, level in enumerate(family.levels)
        if abs(level.log_length - log_scale) <= FRAME_LOG_WINDOW
    ]
    if not kept:
        raise DomainError("No family level lies within the working frame")
    rects = tuple(
        StandardRect(
            math.exp(family.levels[i].log_length - log_scale),
            math.exp(family.levels[i].log_height - log_scale),
        )
        for i in kept
    )
    rotations = None
    if rotated:
        rotations = tuple(sorted({theta for i in kept for theta in family.levels[i].angles}))
    return MaximalConfig(
        rects=rects,
        rotations=rotations,
        grid=grid,
        certificates=certificate_placements(family, rotated, kept),
    )


# ---------------------------------------------------------------------------
# Pointwise lower bounds
# ---------------------------------------------------------------------------

def _placement_averages(f: CounterexampleFunction, rect: StandardRect, stacks: np.ndarray) -> np.ndarray:
    areas = np.concatenate([
        disk_polygon_areas(f.support, stacks[start:start + PLACEMENT_CHUNK])
        for start in range(0, stacks.shape[0], PLACEMENT_CHUNK)
    ]) if stacks.shape[0] else np.empty(0)
    return f.value * np.minimum(areas, rect.area) / rect.area


def grid_anchors(rect: StandardRect, grid: GridSearch) -> np.ndarray:
    """Anchor offsets inside [0, L] x [0, h] spaced step_fraction * h apart on both sides"""
    step = grid.step_fraction * rect.height
    steps_u = min(math.ceil(rect.length / step * (1.0 - GEOMETRY_TOL)), grid.max_steps)
    steps_v = min(int(round(1.0 / grid.step_fraction)), grid.max_steps)
    if steps_u == grid.max_steps and rect.length > step * grid.max_steps:
        logger.debug("Grid capped at %d steps along L = %.6g (requested step %.6g)", steps_u, rect.length, step)
    u, v = np.meshgrid(np.linspace(0.0, rect.length, steps_u + 1), np.linspace(0.0, rect.height, steps_v + 1))
    return np.column_stack([u.ravel(), v.ravel()])


class MaximalEvaluator:
    """Caches certificate polygons and averages for one (f, config) pair"""

    def __init__(self, f: CounterexampleFunction, cfg: MaximalConfig, tol: float = GEOMETRY_TOL):
        self.f = f
        self.cfg = cfg
        self.tol = tol
        self.polygons = [place_rect(cfg.rects[c.rect_index], c.placement) for c in cfg.certificates]
        self.averages = np.array([
            _placement_averages(f, cfg.rects[c.rect_index], polygon.vertices[None, :, :])[0]
            for c, polygon in zip(cfg.certificates, self.polygons)
        ])

    def certificate_values(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        best = np.zeros(pts.shape[0])
        for cert, polygon, average in zip(self.cfg.certificates, self.polygons, self.averages):
            slack = self.tol * self.cfg.rects[cert.rect_index].diameter
            inside = polygon.contains(pts, tol=slack)
            best = np.where(inside, np.maximum(best, average), best)
        return best

    def grid_value(self, x: Point2) -> float:
        grid = self.cfg.grid
        if grid is None:
            return 0.0
        center = np.array([self.f.support.center.x, self.f.support.center.y])
        point = np.array([x.x, x.y])
        distance = float(np.linalg.norm(point - center))
        best = 0.0
        for rect in self.cfg.rects:
            if distance > grid.window_multiplier * (rect.diameter + self.f.support.radius):
                continue
            anchors = grid_anchors(rect, grid)
            corners = rect_corners(rect)
            for angle in self.cfg.angles:
                c, s = math.cos(angle), math.sin(angle)
                rotation = np.array([[c, -s], [s, c]])
                offsets = point - anchors @ rotation.T
                stacks = (corners @ rotation.T)[None, :, :] + offsets[:, None, :]
                values = _placement_averages(self.f, rect, stacks)
                if values.size:
                    best = max(best, float(values.max()))
        return best

    def value(self, x: Point2) -> float:
        certified = float(self.certificate_values(np.array([[x.x, x.y]]))[0])
        return max(certified, self.grid_value(x))

    def values(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        result = self.certificate_values(pts)
        if self.cfg.grid is not None:
            grid_values = np.array([self.grid_value(Point2(float(px), float(py))) for px, py in pts])
            result = np.maximum(result, grid_values)
        return result


def maximal_lower(x: Point2, f: CounterexampleFunction, cfg: MaximalConfig) -> float:
    """max over certificates and grid placements containing x of c |placed R ∩ D| / |R|"""
    return MaximalEvaluator(f, cfg).value(x)


def stratified_points(polygons: Sequence[ConvexPolygon], n: int, seed: int) -> np.ndarray:
    """At least n jittered points, strata along the long side of each placed rectangle"""
    if n < 1:
        raise DomainError("Stratified samples need n >= 1")
    rng = np.random.default_rng(seed)
    per_polygon = math.ceil(n / len(polygons))
    batches = []
    for polygon in polygons:
        if polygon.vertices.shape[0] != 4:
            raise DomainError("Stratified sampling expects placed rectangles")
        origin, first, _, last = polygon.vertices
        strata = np.arange(per_polygon)
        u = (strata + 0.1 + 0.8 * rng.random(per_polygon)) / per_polygon
        v = 0.1 + 0.8 * rng.random(per_polygon)
        batches.append(origin + u[:, None] * (first - origin) + v[:, None] * (last - origin))
    return np.concatenate(batches)


def _evaluate_parallel(evaluator: MaximalEvaluator, points: np.ndarray, n_jobs: int) -> np.ndarray:
    if n_jobs == 1 or points.shape[0] < 2:
        return evaluator.values(points)
    chunks = np.array_split(points, n_jobs)
    parts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(evaluator.values)(chunk) for chunk in chunks if chunk.shape[0]
    )
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# Level sets
# ---------------------------------------------------------------------------

def certify_witness(f: CounterexampleFunction, alpha: float, cfg: MaximalConfig,
                    witness: Sequence[ConvexPolygon], n_points: int = DEFAULT_CERTIFICATION_POINTS,
                    seed: int = DEFAULT_SEED, rel_tol: float = SLACK_TOL,
                    n_jobs: Optional[int] = None) -> Tuple[int, float]:
    """Check maximal_lower >= alpha on a stratified sample of the witness; returns (count, min value)"""
    evaluator = MaximalEvaluator(f, cfg)
    points = stratified_points(witness, n_points, seed)
    values = _evaluate_parallel(evaluator, points, n_jobs or settings.n_jobs)
    failing = np.flatnonzero(values < alpha * (1.0 - rel_tol))
    if failing.size:
        index = int(failing[0])
        point = (float(points[index, 0]), float(points[index, 1]))
        raise CertificationError(point, float(values[index]), alpha, context={"points": int(points.shape[0])})
    return int(points.shape[0]), float(values.min())


def grid_diagnostic(f: CounterexampleFunction, alpha: float, cfg: MaximalConfig,
                    points: np.ndarray, rel_tol: float = SLACK_TOL) -> Dict[str, Any]:
    """
    Certificate-only against grid-inclusive lower bounds at the given points.

    The grid-inclusive value must keep every point certified at alpha; the
    grid-only minimum shows how close the translation search gets on its own.
    """
    if cfg.grid is None:
        raise DomainError("Grid diagnostic needs a configuration with a translation grid")
    evaluator = MaximalEvaluator(f, cfg)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    certified = evaluator.certificate_values(pts)
    searched = np.array([evaluator.grid_value(Point2(float(px), float(py))) for px, py in pts])
    combined = np.maximum(certified, searched)
    logger.debug("Grid diagnostic over %d points: grid-only min %.6g, certified min %.6g",
                 pts.shape[0], searched.min(), certified.min())
    return {
        "points": int(pts.shape[0]),
        "step_fraction": cfg.grid.step_fraction,
        "certificate_min": float(certified.min()),
        "grid_min": float(searched.min()),
        "grid_max": float(searched.max()),
        "combined_min": float(combined.min()),
        "grid_improved": int(np.count_nonzero(searched > certified)),
        "passed": bool(combined.min() >= alpha * (1.0 - rel_tol)),
    }


def _rect_lattice(rect: StandardRect, disk: Disk, resolution: int):
    """Translation lattice at pixel corners covering every placement that meets the disk"""
    extent_x = 2.0 * (disk.radius + rect.length)
    extent_y = 2.0 * (disk.radius + rect.height)
    budget = resolution * resolution
    need_x = MIN_PIXEL_SPAN * extent_x / rect.length
    need_y = MIN_PIXEL_SPAN * extent_y / rect.height
    nx = int(min(budget, max(1, round(math.sqrt(budget * need_x / need_y)))))
    ny = max(1, budget // nx)
    px, py = extent_x / nx, extent_y / ny
    wf, hf = int(math.floor(rect.length / px)), int(math.floor(rect.height / py))
    if wf < 1 or hf < 1:
        return None
    x0 = disk.center.x - disk.radius - rect.length
    y0 = disk.center.y - disk.radius - rect.height
    return nx, ny, px, py, wf, hf, x0, y0


def _pixel_measures(f: CounterexampleFunction, rect: StandardRect, alphas: Sequence[float],
                    resolution: int) -> List[float]:
    lattice = _rect_lattice(rect, f.support, resolution)
    if lattice is None:
        return [0.0] * len(alphas)
    nx, ny, px, py, wf, hf, x0, y0 = lattice
    tx = x0 + px * np.arange(nx - wf + 1)
    ty = y0 + py * np.arange(ny - hf + 1)
    corners = rect_corners(rect)
    averages = np.empty((tx.size, ty.size))
    for i, x in enumerate(tx):
        stacks = corners[None, :, :] + np.column_stack([np.full(ty.size, x), ty])[:, None, :]
        averages[i] = _placement_averages(f, rect, stacks)

    measures = []
    for alpha in alphas:
        mask = (averages > alpha).astype(np.int32)
        if not mask.any():
            measures.append(0.0)
            continue
        # Each certified placement covers a wf x hf block of whole pixels
        diff = np.zeros((nx + 1, ny + 1), dtype=np.int32)
        n_x, n_y = mask.shape
        diff[:n_x, :n_y] += mask
        diff[wf:wf + n_x, :n_y] -= mask
        diff[:n_x, hf:hf + n_y] -= mask
        diff[wf:wf + n_x, hf:hf + n_y] += mask
        covered = np.cumsum(np.cumsum(diff, axis=0), axis=1)[:nx, :ny] > 0
        measures.append(float(np.count_nonzero(covered)) * px * py)
    return measures


def pixel_level_sets(f: CounterexampleFunction, cfg: MaximalConfig, alphas: Sequence[float],
                     resolution: int = DEFAULT_PIXEL_RESOLUTION) -> List[LevelSetEstimate]:
    """
    Axis-parallel level sets on pixel lattices. Each rectangle gets its own
    lattice of resolution**2 translations; a pixel counts only when a
    certified placement covers it entirely, and the reported measure is the
    largest certified area over the rectangles.
    """
    if cfg.rotations is not None:
        raise DomainError("Pixel-certified level sets support axis-parallel configurations only")
    floor_alpha = min(alphas)
    best = np.zeros(len(alphas))
    for rect in cfg.rects:
        ceiling = f.value * min(f.support.area, rect.area) / rect.area
        if ceiling <= floor_alpha:
            continue
        best = np.maximum(best, _pixel_measures(f, rect, alphas, resolution))
    return [
        LevelSetEstimate(alpha=a, measure=float(m), mode=LevelSetMode.PIXEL_CERTIFIED, resolution=resolution)
        for a, m in zip(alphas, best)
    ]


def placement_union_level_set(f: CounterexampleFunction, alpha: float, cfg: MaximalConfig) -> LevelSetEstimate:
    """Exact union of the certificate placements whose average exceeds alpha"""
    evaluator = MaximalEvaluator(f, cfg)
    certified = [p for p, avg in zip(evaluator.polygons, evaluator.averages) if avg > alpha]
    measure = union_area(certified).value if certified else 0.0
    return LevelSetEstimate(
        alpha=alpha,
        measure=measure,
        mode=LevelSetMode.PLACEMENT_UNION,
        certified_points=len(certified),
        min_certified_value=min((a for a in evaluator.averages if a > alpha), default=None),
    )


def level_set_lower(f: CounterexampleFunction, alpha: float, cfg: MaximalConfig,
                    mode: LevelSetMode = LevelSetMode.WITNESS_EXACT,
                    witness: Optional[Sequence[ConvexPolygon]] = None,
                    n_points: int = DEFAULT_CERTIFICATION_POINTS, seed: int = DEFAULT_SEED,
                    resolution: int = DEFAULT_PIXEL_RESOLUTION, rel_tol: float = SLACK_TOL,
                    n_jobs: Optional[int] = None) -> LevelSetEstimate:
    if not alpha > 0:
        raise DomainError(f"Level-set threshold must be positive, got {alpha!r}")
    mode = LevelSetMode(mode)
    if mode == LevelSetMode.WITNESS_EXACT:
        if not witness:
            raise DomainError("Witness-exact level sets need a witness")
        if n_points < DEFAULT_CERTIFICATION_POINTS:
            raise DomainError(f"Witness certification needs >= {DEFAULT_CERTIFICATION_POINTS} points")
        count, lowest = certify_witness(f, alpha, cfg, witness, n_points, seed, rel_tol, n_jobs)
        return LevelSetEstimate(
            alpha=alpha,
            measure=union_area(list(witness)).value,
            mode=mode,
            certified_points=count,
            min_certified_value=lowest,
        )
    if mode == LevelSetMode.PIXEL_CERTIFIED:
        return pixel_level_sets(f, cfg, [alpha], resolution)[0]
    return placement_union_level_set(f, alpha, cfg)


# ---------------------------------------------------------------------------
# Theorem 2, Claim and Remark chains
# ---------------------------------------------------------------------------

def weak_type_ratio(phi: OrliczFunction, f: CounterexampleFunction, alpha: float,
                    level_set: LevelSetEstimate, c_scale: float = 1.0) -> float:
    """|{M f > alpha}| / integral of Phi(C f / alpha)"""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if level_set.measure == 0:
        return 0.0
    return level_set.measure / orlicz_integral(phi, f, c_scale / alpha)


def claim_k_min(consts: ConstructionConstants, k_max: int) -> Dict[str, Optional[int]]:
    """
    Smallest k from which the proof's 'k large' inequality holds through k_max,
    for the corrected bracket 1 + log_+(1/kappa') + k log(1/lam) and for the
    printed one 1 - log_+(kappa') + k log(1/lam)
    """
    log_inv_lam = math.log(1.0 / consts.lam)

    def first_from(bracket) -> Optional[int]:
        k_min = None
        for k in range(k_max, 0, -1):
            if bracket(k) <= 2.0 * k * log_inv_lam:
                k_min = k
            else:
                break
        return k_min

    corrected = first_from(lambda k: 1.0 + max(0.0, math.log(1.0 / consts.kappa_prime)) + k * log_inv_lam)
    printed = first_from(lambda k: 1.0 - max(0.0, math.log(consts.kappa_prime)) + k * log_inv_lam)
    return {"corrected": corrected, "printed": printed}


def claim_mphi_check(level: LevelConstruction, witness: Prop2Witness, consts: ConstructionConstants,
                     certified: Optional[LevelSetEstimate]) -> Dict[str, Any]:
    """Integral of Phi_0(f_k) <= c1 |Y_k| with |{M f_k >= 1}| >= |Y_k|, in the level frame"""
    f = in_level_frame(theorem2_fk(level, consts), level)
    integral = orlicz_integral(PHI0, f)
    y_area = witness.y_area.value
    middle = (2.0 * math.log(1.0 / consts.lam) / consts.kappa_prime) * level.k \
        * consts.lam ** (-level.k) * f.support.area
    return {
        "k": level.k,
        "integral_phi0": integral,
        "middle": middle,
        "c1_y_area": consts.c1 * y_area,
        "y_area": y_area,
        "slack": consts.c1 * y_area / integral - 1.0,
        "chain_ok": integral <= middle * (1.0 + SLACK_TOL) and middle <= consts.c1 * y_area * (1.0 + SLACK_TOL),
        "statement_form_holds": y_area >= consts.c1 * integral,
        "certified": certified is not None,
        "min_certified_value": None if certified is None else certified.min_certified_value,
        "passed": integral <= consts.c1 * y_area and certified is not None,
    }


def divergence_check(phi: OrliczFunction, c_scale: float, family: NestedFamily,
                     consts: ConstructionConstants, tol: float = SLACK_TOL) -> Dict[str, Any]:
    """r_k = integral Phi_0(f_k) / integral Phi(C f_k), closed forms, k over the family"""
    if not c_scale > 0:
        raise DomainError(f"C must be positive, got {c_scale!r}")
    rows = []
    for level in family.levels:
        c_k = consts.lam ** (-level.k) / consts.kappa_prime
        factors = divergence_factors(phi, c_scale, c_k)
        rows.append({"k": level.k, "c_k": c_k, "ratio": divergence_ratio(phi, c_scale, c_k), **factors})

    by_k = {row["k"]: row["ratio"] for row in rows}
    tail = [row["ratio"] for row in rows if row["k"] >= 2]
    increasing = all(b > a for a, b in zip(tail, tail[1:]))
    k_last = rows[-1]["k"]
    growth_ok = True
    if k_last >= DIVERGENCE_GROWTH_MIN_K:
        growth_ok = by_k[k_last] >= DIVERGENCE_GROWTH_FACTOR * by_k[min(3, k_last)]
    k_gain = min(k_last, DIVERGENCE_GAIN_K)
    log_gain = by_k[k_gain] - by_k[2] if 2 in by_k and k_gain > 2 else None
    target = 4.0 * math.log(1.0 / consts.lam)
    asymptotics = is_little_o_of_phi0(phi)
    return {
        "phi": phi.label,
        "C": c_scale,
        "rows": rows,
        "increasing": increasing,
        "growth_ok": growth_ok,
        "gain": log_gain,
        "gain_k": k_gain,
        "gain_target": target,
        "gain_ok": log_gain is not None and log_gain >= target * (1.0 - tol),
        "little_o": asymptotics["little_o"],
        "passed": increasing and growth_ok,
    }


def empirical_weak11(family: NestedFamily, tests: Sequence[CounterexampleFunction],
                     alpha_exponents: Sequence[int] = DEFAULT_ALPHA_EXPONENTS, rotated: bool = False,
                     resolution: int = DEFAULT_PIXEL_RESOLUTION,
                     budget: float = WEAK11_BUDGET) -> Dict[str, Any]:
    """
    sup over tests and alpha = 2**e * peak of alpha |{M f > alpha}| / ||f||_1.

    Axis-parallel runs measure pixel-certified level sets; rotated runs use the
    exact union of certified certificate placements.
    """
    rows = []
    for index, test in enumerate(tests):
        log_scale = math.log(test.support.radius)
        f = test.scaled(length_factor=math.exp(-log_scale))
        cfg = family_config(family, log_scale, rotated=rotated)
        alphas = [2.0 ** e * f.value for e in alpha_exponents]
        if rotated:
            estimates = [placement_union_level_set(f, alpha, cfg) for alpha in alphas]
        else:
            estimates = pixel_level_sets(f, cfg, alphas, resolution)
        for e, estimate in zip(alpha_exponents, estimates):
            rows.append({
                "test": index,
                "exponent": e,
                "alpha": estimate.alpha,
                "measure": estimate.measure,
                "weak_constant": estimate.alpha * estimate.measure / f.l1_norm,
            })
    constant = max((row["weak_constant"] for row in rows), default=0.0)
    logger.debug("Empirical weak-(1,1) constant %.6g over %d tests (rotated=%s)", constant, len(tests), rotated)
    return {
        "constant": constant,
        "rows": rows,
        "rotated": rotated,
        "budget": budget,
        "within_budget": constant <= budget,
    }


def theorem2_certification(level: LevelConstruction, consts: ConstructionConstants, witness: Prop2Witness,
                           n_points: int = DEFAULT_CERTIFICATION_POINTS, seed: int = DEFAULT_SEED,
                           n_jobs: Optional[int] = None,
                           ) -> Tuple[Optional[LevelSetEstimate], Optional[CertificationError]]:
    """Certify M f_k >= 1 on Y_k in the level frame"""
    f = in_level_frame(theorem2_fk(level, consts), level)
    try:
        estimate = level_set_lower(
            f, 1.0, level_config(level), LevelSetMode.WITNESS_EXACT,
            witness=witness.y_set, n_points=n_points, seed=seed, n_jobs=n_jobs,
        )
    except CertificationError as exc:
        logger.warning("Theorem 2 certification failed at level %d: %s", level.k, exc)
        return None, exc
    return estimate, None


def remark_check(k: int, family: NestedFamily, n_points: int = DEFAULT_CERTIFICATION_POINTS,
                 seed: int = DEFAULT_SEED, n_jobs: Optional[int] = None) -> Dict[str, Any]:
    """M f_k >= 1/4 on Y_k and (k+1) ||f_k||_1 <= 2 |Y_k| for the Remark family"""
    level = family.level(k)
    f = in_level_frame(remark_fk(level), level)
    polygons = placed_rects(level)
    overlaps = ConstructionService.pairwise_half_overlaps(level)
    report: Dict[str, Any] = {
        "k": k,
        "aspect": level.aspect,
        "disjoint": overlaps["disjoint"],
        "max_overlap_ratio": overlaps["max_overlap_ratio"],
        "l1_norm": f.l1_norm,
        "rect_area": level.normalized_rect.area,
    }
    try:
        estimate = level_set_lower(
            f, 0.25, level_config(level), LevelSetMode.WITNESS_EXACT,
            witness=polygons, n_points=n_points, seed=seed, n_jobs=n_jobs,
        )
        y_area = estimate.measure
        report.update({"certified": True, "min_certified_value": estimate.min_certified_value})
    except CertificationError as exc:
        y_area = union_area(polygons).value
        report.update({"certified": False, "failing_point": list(exc.point), "failing_value": exc.value})
    lhs = (k + 1) * f.l1_norm
    report.update({
        "y_area": y_area,
        "lhs": lhs,
        "rhs": 2.0 * y_area,
        "norm_ok": math.isclose(f.l1_norm, level.normalized_rect.area, rel_tol=GEOMETRY_TOL),
        "bound_ok": lhs <= 2.0 * y_area,
        "level_ratio": y_area / f.l1_norm,
    })
    report["passed"] = report["disjoint"] and report["certified"] and report["bound_ok"] and report["norm_ok"]
    return report
