"""
Campaign configuration: defaults < flat config file < command-line overrides
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ...config.workbench_constants import (
    DEFAULT_CERTIFICATION_POINTS, DEFAULT_K_MAX, DEFAULT_LAMBDA, DEFAULT_MC_SAMPLES, DEFAULT_MU,
    DEFAULT_PIXEL_RESOLUTION, DEFAULT_PREFIX, DEFAULT_SEED, DEFAULT_SIGMA, DEFAULT_STEP_FRACTION,
    DEFAULT_THETA0, DEFAULT_WINDOW_MULTIPLIER, GEOMETRY_TOL, K_CAP, MAX_STEPS_PER_AXIS, MIN_MC_SAMPLES,
    SLACK_TOL,
)
from ..entities.lacunary import LacunarySequence
from ..entities.maximal import GridSearch, OrliczFunction
from ..exceptions import DomainError


def load_angles_file(path: str) -> List[float]:
    """One angle in radians per line; `#` starts a comment"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"Cannot read angles file {path!r}: {exc}") from exc
    angles = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        try:
            angles.append(float(content))
        except ValueError as exc:
            raise DomainError(f"{path}:{number}: not an angle: {content!r}") from exc
    return angles


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


class CampaignConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # Sequence
    theta0: float = Field(DEFAULT_THETA0, gt=0.0, lt=math.pi / 2)
    sigma: Optional[float] = Field(DEFAULT_SIGMA, gt=0.0, lt=1.0)
    explicit_angles: Optional[List[float]] = None
    lam: float = Field(DEFAULT_LAMBDA, gt=0.0, lt=1.0)
    mu: float = Field(DEFAULT_MU, gt=0.0, lt=1.0)
    prefix: int = Field(DEFAULT_PREFIX, ge=2)
    max_reindex: Optional[int] = Field(0, ge=0)

    # Campaign scale
    k_max: int = Field(DEFAULT_K_MAX, ge=1, le=K_CAP)
    remark: bool = False

    # Tolerances
    geometry_tol: float = Field(GEOMETRY_TOL, gt=0.0, lt=1e-3)
    slack_tol: float = Field(SLACK_TOL, gt=0.0, lt=1e-3)

    # Sampling
    seed: int = DEFAULT_SEED
    samples: int = Field(DEFAULT_MC_SAMPLES, ge=MIN_MC_SAMPLES)
    certification_points: int = Field(DEFAULT_CERTIFICATION_POINTS, ge=1)
    pixel_resolution: int = Field(DEFAULT_PIXEL_RESOLUTION, ge=16)
    step_fraction: float = Field(DEFAULT_STEP_FRACTION, gt=0.0, le=1.0)
    window_multiplier: float = Field(DEFAULT_WINDOW_MULTIPLIER, ge=1.0)

    # Divergence suite
    phi: str = "power:1"
    scale_c: float = Field(1.0, gt=0.0)

    # Outputs
    output_dir: str = "verification_output"

    @field_validator("phi")
    @classmethod
    def validate_phi(cls, value: str) -> str:
        OrliczFunction.parse(value)
        return value

    @field_validator("explicit_angles")
    @classmethod
    def validate_angles(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is None:
            return value
        if len(value) < 2:
            raise ValueError("explicit_angles needs at least two angles")
        if any(not (0.0 < a < math.pi / 2) for a in value):
            raise ValueError("explicit angles must lie in (0, pi/2)")
        if any(b >= a for a, b in zip(value, value[1:])):
            raise ValueError("explicit angles must be strictly decreasing")
        return value

    @model_validator(mode="after")
    def validate_envelope(self) -> "CampaignConfig":
        if not self.lam < self.mu:
            raise ValueError(f"envelope requires lambda < mu, got ({self.lam}, {self.mu})")
        if self.explicit_angles is not None:
            # An explicit list replaces the geometric generator
            self.sigma = None
            self.theta0 = self.explicit_angles[0]
            if self.prefix > len(self.explicit_angles):
                self.prefix = len(self.explicit_angles)
        elif self.sigma is None:
            raise ValueError("either sigma or explicit_angles is required")
        return self

    @classmethod
    def from_sources(cls, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None,
                     env_output_dir: Optional[str] = None) -> "CampaignConfig":
        """Merge the flat key-value file, the output-dir environment override and CLI flags"""
        values: Dict[str, Any] = {}
        if config_file is not None:
            if not Path(config_file).is_file():
                raise DomainError(f"Config file not found: {config_file}")
            values.update({_normalize_key(k): v for k, v in dotenv_values(config_file).items() if v is not None})
        if env_output_dir:
            values["output_dir"] = env_output_dir
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})

        angles_file = values.pop("explicit_angles_file", None)
        if angles_file:
            values["explicit_angles"] = load_angles_file(angles_file)
        return cls(**values)

    def sequence(self) -> LacunarySequence:
        if self.explicit_angles is not None:
            return LacunarySequence.from_angles(self.explicit_angles, self.lam, self.mu)
        return LacunarySequence.geometric(self.theta0, self.sigma, self.lam, self.mu)

    def phi_function(self) -> OrliczFunction:
        return OrliczFunction.parse(self.phi)

    def grid(self) -> GridSearch:
        return GridSearch(
            step_fraction=self.step_fraction,
            window_multiplier=self.window_multiplier,
            max_steps=MAX_STEPS_PER_AXIS,
        )

    def echo(self) -> Dict[str, Any]:
        """Config as recorded in reports; output location excluded so reruns elsewhere compare equal"""
        return self.model_dump(mode="json", exclude={"output_dir"})
