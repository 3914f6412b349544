"""
Global pytest configuration and reusable fixtures
"""
import pytest

from backend.app.domain.entities.lacunary import LacunarySequence
from backend.app.domain.schemas.campaign import CampaignConfig
from backend.app.services.construction_service import ConstructionService
from backend.app.services.lacunary_validator import LacunaryValidator

# Default campaign sequence: theta_j = 0.5 * 0.6**j inside the envelope (0.5, 0.8)
THETA0 = 0.5
SIGMA = 0.6
LAMBDA = 0.5
MU = 0.8


@pytest.fixture(scope="session")
def default_sequence():
    """Default geometric sequence"""
    return LacunarySequence.geometric(THETA0, SIGMA, LAMBDA, MU)


@pytest.fixture(scope="session")
def default_window(default_sequence):
    """Validated window over a 30-angle prefix"""
    return LacunaryValidator.validate_bilacunary(default_sequence, 30)


@pytest.fixture(scope="session")
def default_constants(default_window):
    """Construction constants c, d, kappa, kappa', c1 for the default window"""
    return ConstructionService.constants_for_window(default_window)


@pytest.fixture(scope="session")
def default_family(default_window, default_constants):
    """Nested family k = 1..10"""
    return ConstructionService.build_nested_family(10, default_window, default_constants)


@pytest.fixture(scope="session")
def remark_family(default_sequence):
    """Family without growth condition, levels k = 0..5"""
    angles = [default_sequence.angle(j) for j in range(6)]
    return ConstructionService.build_remark_family(5, angles)


@pytest.fixture
def out_dir(tmp_path):
    """Fresh output directory per test"""
    target = tmp_path / "out"
    target.mkdir()
    return target


@pytest.fixture
def fast_config(out_dir):
    """Small campaign used by service and CLI tests"""
    return CampaignConfig(
        k_max=4,
        samples=20_000,
        certification_points=1_000,
        pixel_resolution=256,
        output_dir=str(out_dir),
    )
