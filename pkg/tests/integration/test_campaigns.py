"""
Full campaigns at the default scale (K = 10, theta0 = 0.5, sigma = 0.6, lambda = 0.5, mu = 0.8)
These are slow; run them with `python run_tests.py --slow`
"""
import json
import math

import pytest

from backend.app import cli
from backend.app.domain.schemas.campaign import CampaignConfig
from backend.app.services.verification_service import VerificationService


@pytest.fixture(scope="module")
def campaign():
    """Default campaign with a reduced pixel resolution for the diagnostic sweep"""
    return VerificationService(CampaignConfig(pixel_resolution=512))


def _failed(result):
    return [(check.name, check.k) for check in result.checks if not check.passed]


@pytest.mark.integration
@pytest.mark.slow
class TestDefaultCampaign:
    """Every suite at K = 10"""

    def test_lemma1(self, campaign):
        """1000 admissible cases with overlap at most 1e-12 |Q_+|"""
        (result,) = campaign.run("lemma1")
        assert result.passed, _failed(result)
        assert result.checks[0].computed["max_overlap_ratio"] <= 1e-12

    def test_lemma2(self, campaign):
        """Sandwich, half-rect union and Monte Carlo agreement for k = 1..10"""
        (result,) = campaign.run("lemma2")
        assert result.passed, _failed(result)
        assert [row["k"] for row in result.rows] == list(range(1, 11))

    def test_prop2(self, campaign):
        """Witness density, quarter-disk identity and certification for k = 1..10"""
        (result,) = campaign.run("prop2")
        assert result.passed, _failed(result)
        assert all(row["density_slack"] > 0 for row in result.rows)

    def test_claim(self, campaign):
        """Checks asserted for k = 5..10"""
        (result,) = campaign.run("claim-mphi")
        assert result.passed, _failed(result)
        assert [check.k for check in result.checks] == list(range(5, 11))

    @pytest.mark.parametrize("scale_c, gain", [(1.0, 8.0 * math.log(2.0)), (2.0, 4.0 * math.log(2.0))])
    def test_divergence(self, scale_c, gain):
        """Phi(t) = t: strictly increasing for k = 2..10 with r_10 - r_2 = 8 log 2 / C"""
        # Arrange
        service = VerificationService(CampaignConfig(scale_c=scale_c))

        # Act
        (result,) = service.run("divergence")

        # Assert
        assert result.passed
        computed = result.checks[0].computed
        assert computed["gain"] == pytest.approx(gain, rel=1e-9)
        assert computed["gain_ok"]
        assert [check.name for check in result.checks] == ["ratio_increasing", "ratio_gain"]

    def test_divergence_negative_control(self):
        """Phi = Phi_0, C = 1: r_k = 1 within 1e-12"""
        (result,) = VerificationService(CampaignConfig(phi="loglike:1")).run("divergence")
        assert not result.passed
        assert all(abs(row["ratio"] - 1.0) <= 1e-12 for row in result.rows)

    def test_weak11(self, campaign):
        """Rotated ratio increasing for k = 1..8, axis-parallel estimate at most 10"""
        (result,) = campaign.run("weak11")
        assert result.passed, _failed(result)
        assert len(result.rows) == 8

    def test_remark(self):
        """Levels 0..5 from the first six angles"""
        (result,) = VerificationService(CampaignConfig(k_max=5)).run("remark")
        assert result.passed, _failed(result)
        assert [check.k for check in result.checks] == list(range(0, 6))


@pytest.mark.integration
@pytest.mark.slow
def test_verify_all_is_deterministic(tmp_path):
    """Two runs of `verify all` with the same seed give byte-identical reports"""
    # Arrange
    args = ["verify", "all", "--k-max", "6", "--resolution", "256"]

    # Act
    first = cli.main(args + ["--out", str(tmp_path / "a")])
    second = cli.main(args + ["--out", str(tmp_path / "b")])

    # Assert
    assert first == second == cli.EXIT_OK
    a = (tmp_path / "a" / "report.json").read_bytes()
    b = (tmp_path / "b" / "report.json").read_bytes()
    assert a == b
    assert json.loads(a)["passed"] is True
    for name in ("table_lemma2.csv", "table_prop2.csv", "table_divergence.csv", "table_weak11.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
