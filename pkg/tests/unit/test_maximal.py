"""
Unit tests for maximal-function lower bounds, level sets and the Theorem 2 / Claim / Remark chains
"""
import math

import numpy as np
import pytest

from backend.app.domain.entities.geometry import Disk, ORIGIN, Placement, Point2, StandardRect
from backend.app.domain.entities.maximal import (
    Certificate, CounterexampleFunction, GridSearch, LevelSetEstimate, LevelSetMode, MaximalConfig,
    OrliczFunction,
)
from backend.app.domain.exceptions import CertificationError, DomainError
from backend.app.services import maximal_service as maximal
from backend.app.services.construction_service import ConstructionService, placed_rects
from backend.app.services.lacunary_validator import LacunaryValidator


@pytest.fixture(scope="module")
def level_two(default_family):
    return default_family.level(2)


@pytest.fixture(scope="module")
def level_two_witness(level_two, default_constants):
    return ConstructionService.witness(level_two, default_constants)


class TestCounterexampleFunctions:
    """Test f_k and frames"""

    @pytest.mark.unit
    @pytest.mark.critical
    def test_theorem2_value_level_one(self, default_family, default_constants):
        """f_1 = lam^-1 / kappa' on B(0, l_1), about 19.330"""
        # Act
        f = maximal.theorem2_fk(default_family.level(1), default_constants)

        # Assert
        assert f.value == pytest.approx(2.0 / default_constants.kappa_prime, rel=1e-14)
        assert f.value == pytest.approx(19.330, abs=1e-3)
        assert f.support.radius == pytest.approx(default_family.level(1).height, rel=1e-14)

    @pytest.mark.unit
    def test_remark_function_norm(self, remark_family):
        """||f_k||_1 = |Q_k|"""
        for level in remark_family.levels:
            f = maximal.in_level_frame(maximal.remark_fk(level), level)
            assert f.l1_norm == pytest.approx(level.normalized_rect.area, rel=1e-12)

    @pytest.mark.unit
    def test_level_frame_keeps_values(self, level_two, default_constants):
        """Rescaling to L_k = 1 changes lengths only"""
        # Arrange
        f = maximal.theorem2_fk(level_two, default_constants)

        # Act
        framed = maximal.in_level_frame(f, level_two)

        # Assert
        assert framed.value == f.value
        assert framed.support.radius == pytest.approx(1.0 / level_two.aspect, rel=1e-12)

    @pytest.mark.unit
    def test_theorem2_starts_at_level_one(self, remark_family, default_constants):
        """Level 0 has no Theorem 2 function"""
        with pytest.raises(DomainError):
            maximal.theorem2_fk(remark_family.level(0), default_constants)


class TestMaximalLower:
    """Test pointwise lower bounds"""

    @pytest.mark.unit
    def test_axis_parallel_config_rejects_rotated_certificates(self):
        """Only unrotated certificates are allowed without rotations"""
        with pytest.raises(DomainError):
            MaximalConfig(rects=(StandardRect(1.0, 0.1),), certificates=(Certificate(0, Placement(0.3)),))

    @pytest.mark.unit
    def test_point_outside_certificates_is_zero(self, level_two):
        """No certificate and no grid: lower bound 0"""
        # Arrange
        f = CounterexampleFunction(1.0, Disk(ORIGIN, level_two.normalized_rect.height))
        cfg = maximal.level_config(level_two)

        # Act & Assert
        assert maximal.maximal_lower(Point2(-5.0, -5.0), f, cfg) == 0.0

    @pytest.mark.unit
    @pytest.mark.critical
    def test_certificate_average_on_witness(self, level_two, default_constants):
        """Inside r_theta Q_k the average of the indicator is pi l/4 in the level frame"""
        # Arrange
        rect = level_two.normalized_rect
        f = CounterexampleFunction(1.0, Disk(ORIGIN, rect.height))
        cfg = maximal.level_config(level_two)
        local = np.array([[0.5, 0.5 * rect.height]])
        x, y = Placement(level_two.angles[0]).apply(local)[0]
        point = Point2(float(x), float(y))

        # Act
        value = maximal.maximal_lower(point, f, cfg)

        # Assert
        assert value == pytest.approx(0.25 * math.pi * rect.height, rel=1e-12)
        assert value >= default_constants.kappa_prime * default_constants.lam ** 2

    @pytest.mark.unit
    def test_grid_search_dominates_certificates(self, level_two):
        """Adding a translation grid can only raise the lower bound"""
        # Arrange
        rect = level_two.normalized_rect
        f = CounterexampleFunction(1.0, Disk(ORIGIN, rect.height))
        plain = maximal.level_config(level_two)
        gridded = maximal.level_config(level_two, grid=GridSearch(step_fraction=0.25))
        point = Point2(0.01, 0.005)

        # Act
        without_grid = maximal.maximal_lower(point, f, plain)
        with_grid = maximal.maximal_lower(point, f, gridded)

        # Assert
        assert with_grid >= without_grid

    @pytest.mark.unit
    @pytest.mark.parametrize("c", [0.5, 3.0, 1e3])
    def test_scaling_covariance(self, level_two, c):
        """maximal_lower(x, c f) = c maximal_lower(x, f)"""
        # Arrange
        rect = level_two.normalized_rect
        f = CounterexampleFunction(1.0, Disk(ORIGIN, rect.height))
        cfg = maximal.level_config(level_two, grid=GridSearch(step_fraction=0.25))
        points = maximal.stratified_points(placed_rects(level_two), 20, seed=5)

        # Act
        base = maximal.MaximalEvaluator(f, cfg).values(points)
        scaled = maximal.MaximalEvaluator(f.scaled(value_factor=c), cfg).values(points)

        # Assert
        assert np.all(base > 0)
        np.testing.assert_allclose(scaled, c * base, rtol=1e-14)

    @pytest.mark.unit
    @pytest.mark.parametrize("s, rtol", [(0.25, 1e-12), (8.0, 1e-12), (3.7, 1e-9)])
    def test_dilation_invariance(self, level_two, s, rtol):
        """Scaling rectangles, support and x by s leaves maximal_lower unchanged"""
        # Arrange
        rect = level_two.normalized_rect
        f = CounterexampleFunction(1.0, Disk(Point2(0.01, 0.002), rect.height))
        cfg = maximal.level_config(level_two, grid=GridSearch(step_fraction=0.25))
        dilated_cfg = MaximalConfig(
            rects=(StandardRect(s * rect.length, s * rect.height),),
            rotations=cfg.rotations,
            grid=cfg.grid,
            certificates=cfg.certificates,
        )
        points = maximal.stratified_points(placed_rects(level_two), 20, seed=6)

        # Act
        base = maximal.MaximalEvaluator(f, cfg).values(points)
        dilated = maximal.MaximalEvaluator(f.scaled(length_factor=s), dilated_cfg).values(s * points)

        # Assert
        np.testing.assert_allclose(dilated, base, rtol=rtol)

    @pytest.mark.unit
    def test_stratified_points_fall_inside(self, level_two):
        """At least n jittered points, all inside the witness"""
        # Arrange
        polygons = placed_rects(level_two)

        # Act
        points = maximal.stratified_points(polygons, 1000, seed=3)

        # Assert
        assert points.shape[0] >= 1000
        inside = np.zeros(points.shape[0], dtype=bool)
        for polygon in polygons:
            inside |= polygon.contains(points)
        assert inside.all()

    @pytest.mark.unit
    def test_stratified_points_are_seeded(self, level_two):
        """Same seed, same sample"""
        polygons = placed_rects(level_two)
        first = maximal.stratified_points(polygons, 100, seed=9)
        second = maximal.stratified_points(polygons, 100, seed=9)
        np.testing.assert_array_equal(first, second)


class TestTranslationGrid:
    """Test the translation search around x"""

    @pytest.mark.unit
    @pytest.mark.critical
    def test_anchor_step_follows_height(self):
        """L/l = 20, step 1/8: anchors every l/8 along both sides, so offset l/8 along L is searched"""
        # Arrange
        rect = StandardRect(20.0, 1.0)
        grid = GridSearch(step_fraction=0.125, max_steps=256)

        # Act
        anchors = maximal.grid_anchors(rect, grid)

        # Assert
        u = np.unique(anchors[:, 0])
        v = np.unique(anchors[:, 1])
        assert u.size == 161
        assert v.size == 9
        np.testing.assert_allclose(np.diff(u), 0.125, rtol=1e-12)
        assert np.any(np.isclose(u, 0.125, rtol=0.0, atol=1e-12))

    @pytest.mark.unit
    def test_anchor_count_is_capped(self):
        """At most max_steps + 1 anchors per side"""
        # Arrange
        rect = StandardRect(1000.0, 1.0)
        grid = GridSearch(step_fraction=0.125, max_steps=64)

        # Act
        anchors = maximal.grid_anchors(rect, grid)

        # Assert
        assert np.unique(anchors[:, 0]).size == 65
        assert np.unique(anchors[:, 1]).size == 9

    @pytest.mark.unit
    def test_one_sided_against_finer_grid(self):
        """A 4x finer search never returns less on 100 random points"""
        # Arrange
        rng = np.random.default_rng(17)
        rect = StandardRect(1.0, 0.25)
        f = CounterexampleFunction(2.0, Disk(Point2(0.1, 0.05), 0.2))
        certificates = (Certificate(0, Placement(0.0)), Certificate(0, Placement(0.4)))
        coarse = MaximalConfig(rects=(rect,), rotations=(0.0, 0.4), grid=GridSearch(step_fraction=0.125),
                               certificates=certificates)
        fine = MaximalConfig(rects=(rect,), rotations=(0.0, 0.4), grid=GridSearch(step_fraction=0.03125),
                             certificates=certificates)
        points = rng.uniform(-1.2, 1.2, size=(100, 2))

        # Act
        coarse_values = maximal.MaximalEvaluator(f, coarse).values(points)
        fine_values = maximal.MaximalEvaluator(f, fine).values(points)

        # Assert
        assert np.any(coarse_values > 0)
        assert np.all(fine_values >= coarse_values - 1e-12)

    @pytest.mark.unit
    def test_grid_diagnostic_keeps_witness_certified(self, level_two, default_constants, level_two_witness):
        """Grid-inclusive values stay above alpha = kappa' lam^2 on Y_2"""
        # Arrange
        alpha = default_constants.kappa_prime * default_constants.lam ** 2
        f = CounterexampleFunction(1.0, level_two_witness.theta_set)
        cfg = maximal.level_config(level_two, grid=GridSearch())
        points = maximal.stratified_points(level_two_witness.y_set, 16, seed=8)

        # Act
        report = maximal.grid_diagnostic(f, alpha, cfg, points)

        # Assert
        assert report["passed"]
        assert report["points"] >= 16
        assert report["combined_min"] >= report["certificate_min"]
        assert report["grid_max"] > 0

    @pytest.mark.unit
    def test_grid_diagnostic_needs_grid(self, level_two, level_two_witness):
        """Configurations without a translation grid are refused"""
        # Arrange
        f = CounterexampleFunction(1.0, level_two_witness.theta_set)
        points = maximal.stratified_points(level_two_witness.y_set, 4, seed=8)

        # Act & Assert
        with pytest.raises(DomainError):
            maximal.grid_diagnostic(f, 0.1, maximal.level_config(level_two), points)


class TestLevelSets:
    """Test level-set lower bounds"""

    @pytest.mark.unit
    @pytest.mark.critical
    def test_theorem2_certification(self, level_two, default_constants, level_two_witness):
        """M f_k >= 1 on Y_k with minimum d / sqrt(4 lam^2k + c^2)"""
        # Act
        estimate, failure = maximal.theorem2_certification(level_two, default_constants, level_two_witness)

        # Assert
        assert failure is None
        assert estimate.certified_points >= 1000
        expected = default_constants.d / math.sqrt(4.0 * 0.5 ** 4 + default_constants.c ** 2)
        assert estimate.min_certified_value == pytest.approx(expected, rel=1e-9)
        assert estimate.min_certified_value >= 1.0
        assert estimate.measure == pytest.approx(level_two_witness.y_area.value, rel=1e-12)

    @pytest.mark.unit
    def test_certification_failure_raises(self, level_two, level_two_witness):
        """An unreachable threshold produces a CertificationError with the failing point"""
        # Arrange
        f = CounterexampleFunction(1.0, level_two_witness.theta_set)

        # Act
        with pytest.raises(CertificationError) as excinfo:
            maximal.certify_witness(f, 10.0, maximal.level_config(level_two), level_two_witness.y_set,
                                    n_points=1000, seed=1, n_jobs=1)

        # Assert
        assert excinfo.value.threshold == 10.0
        assert len(excinfo.value.point) == 2

    @pytest.mark.unit
    def test_witness_mode_needs_enough_points(self, level_two, level_two_witness):
        """Witness certification needs at least 1000 points"""
        f = CounterexampleFunction(1.0, level_two_witness.theta_set)
        with pytest.raises(DomainError):
            maximal.level_set_lower(f, 0.01, maximal.level_config(level_two), LevelSetMode.WITNESS_EXACT,
                                    witness=level_two_witness.y_set, n_points=10)

    @pytest.mark.unit
    def test_parallel_certification_matches_serial(self, level_two, level_two_witness):
        """joblib threads give the same minimum as the serial run"""
        # Arrange
        f = CounterexampleFunction(1.0, level_two_witness.theta_set)
        cfg = maximal.level_config(level_two)

        # Act
        serial = maximal.certify_witness(f, 0.001, cfg, level_two_witness.y_set, 1000, seed=4, n_jobs=1)
        threaded = maximal.certify_witness(f, 0.001, cfg, level_two_witness.y_set, 1000, seed=4, n_jobs=2)

        # Assert
        assert serial == threaded

    @pytest.mark.unit
    def test_placement_union_level_set(self, level_two, default_constants, level_two_witness):
        """All certificates of f_k exceed 1/2, so the union is Y_k"""
        # Arrange
        f = maximal.in_level_frame(maximal.theorem2_fk(level_two, default_constants), level_two)

        # Act
        estimate = maximal.level_set_lower(f, 0.5, maximal.level_config(level_two), LevelSetMode.PLACEMENT_UNION)

        # Assert
        assert estimate.certified_points == 2
        assert estimate.measure == pytest.approx(level_two_witness.y_area.value, rel=1e-12)

    @pytest.mark.unit
    def test_pixel_level_sets_are_monotone(self):
        """Measures shrink as alpha grows and vanish above the ceiling"""
        # Arrange
        f = CounterexampleFunction(1.0, Disk(ORIGIN, 1.0))
        cfg = MaximalConfig(rects=(StandardRect(2.0, 2.0),))
        alphas = [0.05, 0.2, 0.5, 1.0]

        # Act
        estimates = maximal.pixel_level_sets(f, cfg, alphas, resolution=128)

        # Assert
        measures = [e.measure for e in estimates]
        assert measures[0] > 0
        assert all(b <= a for a, b in zip(measures, measures[1:]))
        assert measures[-1] == 0.0
        assert all(e.mode == LevelSetMode.PIXEL_CERTIFIED for e in estimates)

    @pytest.mark.unit
    def test_pixel_mode_rejects_rotations(self, level_two):
        """Pixel lattices are axis-parallel only"""
        f = CounterexampleFunction(1.0, Disk(ORIGIN, 0.01))
        with pytest.raises(DomainError):
            maximal.pixel_level_sets(f, maximal.level_config(level_two), [0.1])

    @pytest.mark.unit
    def test_weak_type_ratio(self):
        """|{M f > alpha}| / int Phi(C f / alpha), and 0 for an empty level set"""
        # Arrange
        f = CounterexampleFunction(2.0, Disk(ORIGIN, 1.0))
        estimate = LevelSetEstimate(alpha=0.5, measure=10.0, mode=LevelSetMode.WITNESS_EXACT)
        empty = LevelSetEstimate(alpha=0.5, measure=0.0, mode=LevelSetMode.WITNESS_EXACT)
        identity = OrliczFunction.power(1.0)

        # Act & Assert
        assert maximal.weak_type_ratio(identity, f, 0.5, estimate) == pytest.approx(10.0 / (math.pi * 4.0))
        assert maximal.weak_type_ratio(identity, f, 0.5, empty) == 0.0


class TestChains:
    """Test the Claim, divergence, Remark and weak-(1,1) chains"""

    @pytest.mark.unit
    @pytest.mark.critical
    def test_claim_k_min(self, default_constants):
        """Corrected bracket gives k_min = 5, the printed one 2"""
        assert maximal.claim_k_min(default_constants, 10) == {"corrected": 5, "printed": 2}

    @pytest.mark.unit
    def test_claim_chain_at_k_min(self, default_family, default_constants):
        """int Phi_0(f_5) <= c1 |Y_5| with certification at alpha = 1"""
        # Arrange
        level = default_family.level(5)
        witness = ConstructionService.witness(level, default_constants)
        estimate, _ = maximal.theorem2_certification(level, default_constants, witness)

        # Act
        report = maximal.claim_mphi_check(level, witness, default_constants, estimate)

        # Assert
        assert report["chain_ok"]
        assert report["passed"]
        assert report["slack"] > 0

    @pytest.mark.unit
    @pytest.mark.critical
    def test_divergence_power_one(self, default_family, default_constants):
        """Phi(t) = t, C = 2: strictly increasing and r_10 - r_2 = 4 log 2"""
        # Act
        report = maximal.divergence_check(OrliczFunction.power(1.0), 2.0, default_family, default_constants)

        # Assert
        assert report["increasing"]
        assert report["passed"]
        assert report["gain"] == pytest.approx(4.0 * math.log(2.0), rel=1e-9)
        assert report["gain_ok"]

    @pytest.mark.unit
    def test_divergence_negative_control(self, default_family, default_constants):
        """Phi = Phi_0, C = 1: ratios identically 1, not increasing"""
        # Act
        report = maximal.divergence_check(OrliczFunction.phi0(), 1.0, default_family, default_constants)

        # Assert
        assert all(row["ratio"] == pytest.approx(1.0, abs=1e-12) for row in report["rows"])
        assert not report["increasing"]

    @pytest.mark.unit
    @pytest.mark.critical
    def test_remark_chain(self, remark_family):
        """M >= 1/4 on Y_k and (k+1) ||f_k||_1 <= 2 |Y_k|"""
        for level in remark_family.levels:
            # Act
            report = maximal.remark_check(level.k, remark_family, n_points=1000, seed=400 + level.k)

            # Assert
            assert report["passed"], level.k
            assert report["min_certified_value"] == pytest.approx(0.25, rel=1e-9)
            assert report["level_ratio"] >= 0.5 * (level.k + 1)

    @pytest.mark.unit
    def test_axis_parallel_weak11_is_bounded(self, default_family, default_constants):
        """Empirical weak-(1,1) constant of the nested family stays below 10"""
        # Arrange
        tests = [maximal.theorem2_fk(default_family.level(k), default_constants) for k in (1, 3)]

        # Act
        result = maximal.empirical_weak11(default_family, tests, resolution=128)

        # Assert
        assert 0.0 < result["constant"] <= 10.0
        assert result["within_budget"]

    @pytest.mark.unit
    def test_family_config_drops_distant_levels(self, default_sequence, default_constants):
        """Levels more than e^200 from the frame are omitted and certificates reindexed"""
        # Arrange
        window = LacunaryValidator.validate_bilacunary(default_sequence, 41)
        family = ConstructionService.build_nested_family(40, window, default_constants)

        # Act
        cfg = maximal.family_config(family, family.level(40).log_length)

        # Assert
        assert 1 <= len(cfg.rects) < 40
        assert all(0 <= cert.rect_index < len(cfg.rects) for cert in cfg.certificates)
