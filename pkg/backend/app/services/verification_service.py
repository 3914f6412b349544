"""
Verification campaigns
Runs the suites over a CampaignConfig and collects CheckRecords and table rows
"""

import logging
import math
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..config.workbench_constants import (
    DEFAULT_ALPHA_EXPONENTS, DIVERGENCE_GAIN_K, DIVERGENCE_GROWTH_MIN_K, GRID_DIAGNOSTIC_POINTS,
    ROTATED_ALPHA_EXPONENTS, SUITES, WEAK11_BUDGET,
)
from ..domain.entities.construction import ConstructionConstants, NestedFamily
from ..domain.entities.geometry import StandardRect
from ..domain.entities.lacunary import SlopeWindow
from ..domain.entities.maximal import CounterexampleFunction, GridSearch, LevelSetMode, OrliczFunction
from ..domain.exceptions import CertificationError, DomainError
from ..domain.schemas.campaign import CampaignConfig
from ..domain.schemas.report import CheckRecord, SuiteResult
from ..geometry import half_overlap, lemma1_disjoint, lemma1_proof_bounds
from ..geometry.disjointness import disjointness_threshold
from . import maximal_service as maximal
from .construction_service import ConstructionService
from .lacunary_validator import LacunaryValidator

logger = logging.getLogger(__name__)

LEMMA1_SAMPLES = 1000
BLOWUP_MAX_K = 8

# Seed offsets keep every suite's randomness independent of execution order
SEED_OFFSETS = {"lemma1": 1, "lemma2": 100, "prop2": 200, "claim-mphi": 300, "remark": 400}


def plain(value: Any) -> Any:
    """numpy scalars and containers to JSON-native Python values"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def _record(suite: str, name: str, passed: bool, k: Optional[int] = None, inputs: Optional[Dict] = None,
            computed: Optional[Dict] = None, bound: Optional[float] = None, slack: Optional[float] = None,
            notes: Optional[List[str]] = None) -> CheckRecord:
    return CheckRecord(
        suite=suite,
        name=name,
        k=k,
        inputs=plain(inputs or {}),
        computed=plain(computed or {}),
        bound=None if bound is None else float(bound),
        slack=None if slack is None else float(slack),
        passed=bool(passed),
        notes=notes or [],
    )


class VerificationService:
    """Builds the sequence, window, constants and families once and runs suites on demand"""

    def __init__(self, config: CampaignConfig):
        self.config = config
        self.sequence = config.sequence()
        self._certified: Dict[int, Any] = {}
        self._suites: Dict[str, Callable[[], SuiteResult]] = {
            "lemma1": self.run_lemma1,
            "lemma2": self.run_lemma2,
            "prop2": self.run_prop2,
            "claim-mphi": self.run_claim,
            "divergence": self.run_divergence,
            "remark": self.run_remark,
            "weak11": self.run_weak11,
        }

    # -- shared objects -------------------------------------------------------

    @property
    def prefix(self) -> int:
        prefix = max(self.config.prefix, self.config.k_max + 1)
        if self.sequence.length is not None:
            prefix = min(prefix, self.sequence.length)
        return prefix

    @cached_property
    def window(self) -> SlopeWindow:
        return LacunaryValidator.validate_bilacunary(self.sequence, self.prefix, max_j0=self.config.max_reindex)

    @cached_property
    def constants(self) -> ConstructionConstants:
        return ConstructionService.constants_for_window(self.window)

    @cached_property
    def family(self) -> NestedFamily:
        return ConstructionService.build_nested_family(self.config.k_max, self.window, self.constants)

    @cached_property
    def grid(self) -> GridSearch:
        return self.config.grid()

    @cached_property
    def witnesses(self):
        return {level.k: ConstructionService.witness(level, self.constants) for level in self.family.levels}

    @property
    def remark_k_max(self) -> int:
        available = self.sequence.length if self.sequence.length is not None else self.config.k_max + 1
        return min(self.config.k_max, available - 1)

    @cached_property
    def remark_family(self) -> NestedFamily:
        angles = [self.sequence.angle(j) for j in range(self.remark_k_max + 1)]
        return ConstructionService.build_remark_family(self.remark_k_max, angles)

    def certification(self, level):
        """Theorem 2 witness certification at alpha = 1, shared by the claim and blowup runs"""
        if level.k not in self._certified:
            self._certified[level.k] = maximal.theorem2_certification(
                level, self.constants, self.witnesses[level.k], self.config.certification_points,
                self.seed("claim-mphi", level.k),
            )
        return self._certified[level.k]

    def seed(self, suite: str, k: int = 0) -> int:
        return self.config.seed + SEED_OFFSETS.get(suite, 0) + k

    # -- campaign -------------------------------------------------------------

    def run(self, which: str) -> List[SuiteResult]:
        if which == "all":
            names = list(SUITES)
        elif which in self._suites:
            names = [which]
        else:
            raise DomainError(f"Unknown suite {which!r}; choose from {', '.join(SUITES)} or all")
        results = []
        for name in names:
            logger.info("Running suite %s (K=%d)", name, self.config.k_max)
            result = self._suites[name]()
            logger.info("Suite %s: %s", name, "pass" if result.passed else "FAIL")
            results.append(result)
        return results

    @staticmethod
    def _suite(name: str, checks: List[CheckRecord], rows: Optional[List[Dict]] = None,
               warnings: Optional[List[str]] = None) -> SuiteResult:
        return SuiteResult(
            suite=name,
            passed=all(check.passed for check in checks),
            checks=checks,
            rows=plain(rows or []),
            warnings=warnings or [],
        )

    # -- suites ---------------------------------------------------------------

    def run_lemma1(self) -> SuiteResult:
        """Random admissible (L/l, vartheta, theta) with the predicate true: halves must be disjoint"""
        rng = np.random.default_rng(self.seed("lemma1"))
        worst = 0.0
        worst_case = None
        proof_ok = True
        for _ in range(LEMMA1_SAMPLES):
            aspect = float(np.exp(rng.uniform(math.log(2.5), math.log(500.0))))
            rect = StandardRect(1.0, 1.0 / aspect)
            min_gap = math.atan(disjointness_threshold(rect))
            vartheta = float(rng.uniform(0.0, 0.5 * math.pi - min_gap))
            theta = float(rng.uniform(vartheta + min_gap, 0.5 * math.pi))
            if not (theta < 0.5 * math.pi and lemma1_disjoint(rect, vartheta, theta)):
                continue
            ratio = half_overlap(rect, vartheta, theta) / (0.5 * rect.area)
            if ratio >= worst:
                worst, worst_case = ratio, {"aspect": aspect, "vartheta": vartheta, "theta": theta}
            bounds = lemma1_proof_bounds(rect, theta - vartheta)
            proof_ok = proof_ok and bounds["x0_ok"] and bounds["norm_ok"]

        tol = self.config.geometry_tol
        checks = [
            _record(
                "lemma1", "half_rect_disjointness", worst <= tol,
                inputs={"samples": LEMMA1_SAMPLES, "seed": self.seed("lemma1")},
                computed={"max_overlap_ratio": worst, "worst_case": worst_case},
                bound=tol, slack=tol - worst,
                notes=["The predicate is sufficient only; a false predicate asserts nothing"],
            ),
            _record(
                "lemma1", "proof_point_inside_half_length", proof_ok,
                inputs={"samples": LEMMA1_SAMPLES},
                computed={"all_within": proof_ok},
            ),
        ]
        return self._suite("lemma1", checks)

    def run_lemma2(self) -> SuiteResult:
        checks, rows = [], []
        consts = self.constants
        for level in self.family.levels:
            sandwich = ConstructionService.aspect_sandwich(level, consts, self.config.geometry_tol)
            union = ConstructionService.verify_lemma2_iii(
                level, mc_samples=self.config.samples, seed=self.seed("lemma2", level.k),
                tol=self.config.geometry_tol,
            )
            checks.append(_record(
                "lemma2", "size_and_aspect", sandwich["size_ok"] and sandwich["lower_ok"]
                and sandwich["upper_ok"] and sandwich["formula_ok"] and sandwich["identity_ok"],
                k=level.k, inputs={"epsilon": level.epsilon}, computed=sandwich,
                bound=sandwich["lower"], slack=level.aspect / sandwich["lower"] - 1.0,
            ))
            checks.append(_record(
                "lemma2", "half_rect_union", union["passed"], k=level.k,
                inputs={"samples": self.config.samples, "seed": self.seed("lemma2", level.k)},
                computed=union, bound=union["bound"], slack=union["slack"],
                notes=["Normalized frame L_k = 1"],
            ))
            if level.k < self.window.size:
                gaps = ConstructionService.gap_bound_report(self.window, consts, level.k)
                checks.append(_record(
                    "lemma2", "gap_bound", gaps["passed"], k=level.k,
                    computed={"floor": gaps["floor"], "min_tan_gap": min(r["tan_gap"] for r in gaps["rows"])},
                    bound=gaps["floor"],
                ))
            rows.append({
                "k": level.k,
                "aspect": level.aspect,
                "aspect_lower": sandwich["lower"],
                "aspect_upper": sandwich["upper"],
                "log_length": level.log_length,
                "log_height": level.log_height,
                "union": union["union"],
                "union_bound": union["bound"],
                "union_slack": union["slack"],
                "mc_union": union.get("mc_union"),
                "mc_std": union.get("mc_std"),
            })
        order = ConstructionService.verify_total_order(self.family)
        checks.append(_record(
            "lemma2", "total_order", order["passed"],
            computed={"log_diameters": order["log_diameters"], "diameter_ok": order["diameter_ok"]},
        ))
        return self._suite("lemma2", checks, rows)

    def run_prop2(self) -> SuiteResult:
        checks, rows = [], []
        consts = self.constants
        for level in self.family.levels:
            witness = self.witnesses[level.k]
            w = witness.checks
            checks.append(_record(
                "prop2", "witness_density", w["density_ok"] and w["disk_area_ok"], k=level.k,
                computed={"y_area": w["y_area"], "theta_area": w["theta_area"]},
                bound=w["bound"], slack=w["slack"],
            ))
            checks.append(_record(
                "prop2", "quarter_disk_identity", w["quarter_ok"], k=level.k,
                computed={"max_relative_error": w["max_quarter_error"]}, bound=self.config.slack_tol,
            ))
            alpha = consts.kappa_prime * consts.lam ** level.k
            indicator = CounterexampleFunction(1.0, witness.theta_set)
            try:
                estimate = maximal.level_set_lower(
                    indicator, alpha, maximal.level_config(level), LevelSetMode.WITNESS_EXACT,
                    witness=witness.y_set, n_points=self.config.certification_points,
                    seed=self.seed("prop2", level.k),
                )
                certified, lowest, computed = True, estimate.min_certified_value, {}
            except CertificationError as exc:
                certified, lowest = False, exc.value
                computed = {"failing_point": list(exc.point)}
            computed.update({"min_value": lowest, "points": self.config.certification_points})
            checks.append(_record(
                "prop2", "maximal_lower_on_witness", certified, k=level.k,
                inputs={"alpha": alpha, "seed": self.seed("prop2", level.k)}, computed=computed,
                bound=alpha, slack=None if lowest is None else lowest / alpha - 1.0,
            ))
            points = maximal.stratified_points(witness.y_set, GRID_DIAGNOSTIC_POINTS, self.seed("prop2", level.k))
            search = maximal.grid_diagnostic(indicator, alpha, maximal.level_config(level, grid=self.grid), points)
            checks.append(_record(
                "prop2", "grid_search", search["passed"], k=level.k,
                inputs={"alpha": alpha, "step_fraction": self.grid.step_fraction,
                        "window_multiplier": self.grid.window_multiplier},
                computed=search, bound=alpha, slack=search["combined_min"] / alpha - 1.0,
            ))
            rows.append({
                "k": level.k,
                "aspect": level.aspect,
                "y_over_theta": w["y_area"] / w["theta_area"],
                "kappa_k_lam_inv_k": consts.kappa * level.k * consts.lam ** (-level.k),
                "density_slack": w["slack"],
                "quarter_error": w["max_quarter_error"],
                "certified_min": lowest,
                "certified_bound": alpha,
                "grid_min": search["grid_min"],
            })
        return self._suite("prop2", checks, rows)

    def run_claim(self) -> SuiteResult:
        consts = self.constants
        k_mins = maximal.claim_k_min(consts, self.config.k_max)
        k_min = k_mins["corrected"]
        checks, rows = [], []
        for level in self.family.levels:
            witness = self.witnesses[level.k]
            estimate, failure = self.certification(level)
            report = maximal.claim_mphi_check(level, witness, consts, estimate)
            rows.append({
                "k": level.k,
                "integral_phi0": report["integral_phi0"],
                "middle": report["middle"],
                "c1_y_area": report["c1_y_area"],
                "y_area": report["y_area"],
                "slack": report["slack"],
                "certified_min": report["min_certified_value"],
            })
            if k_min is None or level.k < k_min:
                continue
            computed = dict(report)
            if failure is not None:
                computed["failing_point"] = list(failure.point)
            checks.append(_record(
                "claim-mphi", "integral_below_c1_witness", report["passed"] and report["chain_ok"], k=level.k,
                inputs={"k_min": k_min}, computed=computed, bound=report["c1_y_area"], slack=report["slack"],
            ))
        warnings = [
            "Constant placement: the statement reads |{M f_k >= 1}| >= c1 * int Phi_0(f_k); the proof chain "
            "gives int Phi_0(f_k) <= c1 |Y_k|, which is what is verified",
            f"k_min with bracket 1 + log_+(1/kappa') + k log(1/lambda): {k_mins['corrected']}; with the printed "
            f"bracket 1 - log_+(kappa') + k log(1/lambda): {k_mins['printed']}",
        ]
        if k_min is None:
            warnings.append(f"No k <= {self.config.k_max} satisfies the large-k inequality; nothing asserted")
        return self._suite("claim-mphi", checks, rows, warnings)

    def run_divergence(self) -> SuiteResult:
        phi = self.config.phi_function()
        report = maximal.divergence_check(phi, self.config.scale_c, self.family, self.constants,
                                          self.config.slack_tol)
        checks = [_record(
            "divergence", "ratio_increasing", report["increasing"],
            inputs={"phi": phi.label, "C": self.config.scale_c},
            computed={"gain": report["gain"], "gain_target": report["gain_target"], "gain_ok": report["gain_ok"]},
        )]
        if self.config.k_max >= DIVERGENCE_GAIN_K:
            checks.append(_record(
                "divergence", "ratio_gain", report["gain_ok"], k=report["gain_k"],
                inputs={"phi": phi.label, "C": self.config.scale_c},
                computed={"gain": report["gain"]}, bound=report["gain_target"],
                slack=report["gain"] - report["gain_target"],
            ))
        if self.config.k_max >= DIVERGENCE_GROWTH_MIN_K:
            checks.append(_record("divergence", "ratio_growth", report["growth_ok"], inputs={"phi": phi.label}))
        warnings = []
        if not report["little_o"]:
            warnings.append(f"{phi.label} does not look like o(Phi_0) on the sampled t grid")
        return self._suite("divergence", checks, report["rows"], warnings)

    def run_remark(self) -> SuiteResult:
        checks, rows = [], []
        family = self.remark_family
        for level in family.levels:
            report = maximal.remark_check(
                level.k, family, self.config.certification_points, self.seed("remark", level.k)
            )
            checks.append(_record(
                "remark", "remark_chain", report["passed"], k=level.k, computed=report,
                bound=report["lhs"], slack=report["rhs"] / report["lhs"] - 1.0,
            ))
            rows.append({
                "k": level.k,
                "aspect": level.aspect,
                "y_area": report["y_area"],
                "l1_norm": report["l1_norm"],
                "level_ratio": report["level_ratio"],
                "half_k_plus_one": 0.5 * (level.k + 1),
            })
        return self._suite("remark", checks, rows)

    def blowup_rows(self, remark: Optional[bool] = None, k_max: Optional[int] = None) -> List[Dict[str, Any]]:
        """Rotated weak-type ratio next to the axis-parallel weak-(1,1) estimate, per k"""
        remark = self.config.remark if remark is None else remark
        limit = min(self.config.k_max, BLOWUP_MAX_K) if k_max is None else k_max
        identity = OrliczFunction.power(1.0)
        rows = []
        if remark:
            family = self.remark_family
            for level in family.levels[:limit + 1]:
                report = maximal.remark_check(
                    level.k, family, self.config.certification_points, self.seed("remark", level.k)
                )
                test = maximal.remark_fk(level)
                axis = maximal.empirical_weak11(family, [test], resolution=self.config.pixel_resolution)
                rows.append({
                    "k": level.k,
                    "level_ratio": report["level_ratio"],
                    "rotated_ratio": 0.25 * report["level_ratio"],
                    "axis_weak11": axis["constant"],
                    "certified": report["certified"],
                })
            return rows

        consts = self.constants
        for level in self.family.levels[:limit]:
            estimate, _ = self.certification(level)
            f_frame = maximal.in_level_frame(maximal.theorem2_fk(level, consts), level)
            rotated = 0.0
            if estimate is not None:
                # A witness certified at value >= 1 lies inside {M f_k > 1/2}
                rotated = maximal.weak_type_ratio(identity, f_frame, 0.5, estimate)
            test = maximal.theorem2_fk(level, consts)
            axis = maximal.empirical_weak11(self.family, [test], resolution=self.config.pixel_resolution)
            contrast = maximal.empirical_weak11(
                self.family, [test], alpha_exponents=ROTATED_ALPHA_EXPONENTS, rotated=True
            )
            rows.append({
                "k": level.k,
                "rotated_ratio": rotated,
                "axis_weak11": axis["constant"],
                "rotated_weak11": contrast["constant"],
                "certified": estimate is not None,
            })
        return rows

    def run_weak11(self) -> SuiteResult:
        rows = self.blowup_rows()
        ratios = [row["rotated_ratio"] for row in rows]
        axis = [row["axis_weak11"] for row in rows]
        checks = [
            _record(
                "weak11", "rotated_ratio_increasing",
                all(row["certified"] for row in rows) and all(b > a for a, b in zip(ratios, ratios[1:])),
                computed={"ratios": ratios},
            ),
            _record(
                "weak11", "axis_weak11_bounded", max(axis) <= WEAK11_BUDGET,
                inputs={"alpha_exponents": list(DEFAULT_ALPHA_EXPONENTS),
                        "resolution": self.config.pixel_resolution},
                computed={"constants": axis}, bound=WEAK11_BUDGET, slack=WEAK11_BUDGET - max(axis),
                notes=["Empirical lower estimate of the weak-(1,1) constant; pixel-certified level sets"],
            ),
        ]
        if self.config.remark:
            checks.append(_record(
                "weak11", "remark_level_ratio",
                all(row["level_ratio"] >= 0.5 * (row["k"] + 1) for row in rows),
                computed={"level_ratios": [row["level_ratio"] for row in rows]},
            ))
        return self._suite("weak11", checks, rows)
