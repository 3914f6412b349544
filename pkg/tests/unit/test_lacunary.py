"""
Unit tests for lacunary sequences and the bilacunarity validator - CRITICAL functionality
"""
import math

import pytest

from backend.app.domain.entities.lacunary import LacunarySequence
from backend.app.domain.exceptions import BilacunarityError, DomainError
from backend.app.services.lacunary_validator import LacunaryValidator


class TestLacunarySequence:
    """Test angle generation"""

    @pytest.mark.unit
    @pytest.mark.critical
    @pytest.mark.parametrize("j, expected", [(0, 0.5), (2, 0.18), (10, 0.5 * 0.6 ** 10)])
    def test_geometric_angles(self, default_sequence, j, expected):
        """theta_j = theta0 * sigma**j"""
        # Act & Assert
        assert default_sequence.angle(j) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.unit
    def test_tenth_angle_value(self, default_sequence):
        """0.5 * 0.6**10 is about 0.0030233"""
        assert default_sequence.angle(10) == pytest.approx(0.0030233, abs=1e-7)

    @pytest.mark.unit
    def test_explicit_angles_are_stored(self):
        """Explicit sequences return stored values and stop at their length"""
        # Arrange
        seq = LacunarySequence.from_angles([0.4, 0.2, 0.1], 0.4, 0.6)

        # Act & Assert
        assert seq.length == 3
        assert seq.angle(1) == 0.2
        with pytest.raises(DomainError):
            seq.angle(3)

    @pytest.mark.unit
    @pytest.mark.parametrize("angles", [[0.4], [0.4, 0.4], [0.2, 0.4], [2.0, 0.1]])
    def test_invalid_explicit_angles(self, angles):
        """Explicit angles must be at least two, strictly decreasing and inside (0, pi/2)"""
        with pytest.raises(DomainError):
            LacunarySequence.from_angles(angles, 0.4, 0.6)

    @pytest.mark.unit
    @pytest.mark.parametrize("lam, mu", [(0.6, 0.5), (0.0, 0.5), (0.5, 1.0)])
    def test_envelope_must_be_ordered(self, lam, mu):
        """0 < lambda < mu < 1"""
        with pytest.raises(DomainError):
            LacunarySequence.geometric(0.5, 0.6, lam, mu)

    @pytest.mark.unit
    def test_negative_index_rejected(self, default_sequence):
        """Indices start at 0"""
        with pytest.raises(DomainError):
            default_sequence.angle(-1)


class TestBilacunarityValidator:
    """Test LacunaryValidator"""

    @pytest.mark.unit
    @pytest.mark.critical
    def test_default_sequence_has_j0_zero(self, default_sequence):
        """Default config validates from j0 = 0 with 29 ratios over 30 angles"""
        # Act
        window = LacunaryValidator.validate_bilacunary(default_sequence, 30)
        report = LacunaryValidator.inspect(default_sequence, 30)

        # Assert
        assert window.j0 == 0
        assert window.m0 == pytest.approx(math.tan(0.5), rel=1e-15)
        assert window.m0 == pytest.approx(0.5463, abs=1e-4)
        assert len(report.ratios) == 29
        assert report.ratios[0].ratio == pytest.approx(0.5662, abs=1e-4)
        assert report.ratios[-1].ratio == pytest.approx(0.6, abs=1e-6)
        assert all(r.within_envelope for r in report.ratios)

    @pytest.mark.unit
    @pytest.mark.critical
    def test_tight_envelope_without_reindexing_fails(self):
        """(0.58, 0.61): the first ratio 0.5662 is outside and j0 = 0 is required"""
        # Arrange
        seq = LacunarySequence.geometric(0.5, 0.6, 0.58, 0.61)

        # Act
        with pytest.raises(BilacunarityError) as excinfo:
            LacunaryValidator.validate_bilacunary(seq, 5, max_j0=0)

        # Assert
        assert excinfo.value.violations[0][0] == 0
        assert excinfo.value.violations[0][1] == pytest.approx(0.5662, abs=1e-4)
        assert "0.5662" in str(excinfo.value)

    @pytest.mark.unit
    def test_tight_envelope_reindexes_when_unbounded(self):
        """Without a reindexing bound the smallest admissible j0 is 1"""
        # Arrange
        seq = LacunarySequence.geometric(0.5, 0.6, 0.58, 0.61)

        # Act
        window = LacunaryValidator.validate_bilacunary(seq, 5)

        # Assert
        assert window.j0 == 1
        assert window.angle(0) == pytest.approx(0.3, rel=1e-15)

    @pytest.mark.unit
    def test_halving_explicit_sequence(self):
        """theta_j = 0.5 / 2**j with (0.4, 0.6) validates and ratios approach 0.5"""
        # Arrange
        seq = LacunarySequence.from_angles([0.5 / 2 ** j for j in range(12)], 0.4, 0.6)

        # Act
        window = LacunaryValidator.validate_bilacunary(seq, 12)
        report = LacunaryValidator.inspect(seq, 12)

        # Assert
        assert window.j0 == 0
        assert report.ratios[-1].ratio == pytest.approx(0.5, abs=1e-5)

    @pytest.mark.unit
    def test_short_prefix_rejected(self, default_sequence):
        """prefix must be at least 2"""
        with pytest.raises(DomainError):
            LacunaryValidator.validate_bilacunary(default_sequence, 1)

    @pytest.mark.unit
    def test_report_is_invalid_without_raising(self):
        """inspect returns the errors instead of raising"""
        # Arrange
        seq = LacunarySequence.geometric(0.5, 0.6, 0.58, 0.61)

        # Act
        report = LacunaryValidator.inspect(seq, 5, max_j0=0)

        # Assert
        assert report.valid is False
        assert report.j0 is None
        assert report.errors
        assert report.warnings

    @pytest.mark.unit
    def test_slope_cap_forces_reindexing(self):
        """m_j0 <= 1: a first angle above pi/4 cannot be j0"""
        # Arrange
        seq = LacunarySequence.geometric(1.2, 0.6, 0.3, 0.9)

        # Act
        report = LacunaryValidator.inspect(seq, 10)

        # Assert
        assert report.valid
        assert report.j0 >= 1
        assert report.m_j0 <= 1.0

    @pytest.mark.unit
    def test_ratio_sandwich(self, default_window):
        """lam^(k-j) m_j <= m_k <= mu^(k-j) m_j over the window"""
        # Act & Assert
        for j in range(0, 10):
            for k in range(j + 1, 12):
                assert default_window.ratio_sandwich(j, k)

    @pytest.mark.unit
    def test_tan_angle_consistency(self, default_sequence):
        """m_j / theta_j in (1, 1.2] and decreasing for theta_j < 0.5"""
        # Act
        result = LacunaryValidator.tan_angle_consistency(default_sequence, 30)

        # Assert
        assert result["valid"]
        assert len(result["quotients"]) == 29
