from pydantic import BaseModel, Field
from typing import List, Optional, Dict, Any


class RatioRecord(BaseModel):
    """One consecutive slope ratio m_{j+1} / m_j"""
    j: int
    ratio: float
    within_envelope: bool


class SlopeWindowReport(BaseModel):
    """Result of validating a sequence prefix"""
    valid: bool
    j0: Optional[int] = None
    prefix: int
    lam: float
    mu: float
    m_j0: Optional[float] = None
    slopes: List[float]
    ratios: List[RatioRecord]
    errors: List[str] = []
    warnings: List[str] = []


class CheckRecord(BaseModel):
    """One verified inequality or identity"""
    suite: str
    name: str
    k: Optional[int] = None
    inputs: Dict[str, Any] = Field(default_factory=dict)
    computed: Dict[str, Any] = Field(default_factory=dict)
    bound: Optional[float] = None
    slack: Optional[float] = None
    passed: bool
    notes: List[str] = []


class SuiteResult(BaseModel):
    suite: str
    passed: bool
    checks: List[CheckRecord]
    rows: List[Dict[str, Any]] = []
    warnings: List[str] = []


class EnvironmentStamp(BaseModel):
    """Versions only; no timestamps or hostnames"""
    package: str
    package_version: str
    python_version: str
    numpy_version: str
    scipy_version: str
    pandas_version: str


class VerificationReport(BaseModel):
    command: str
    passed: bool
    suites: List[SuiteResult] = []
    slope_window: Optional[SlopeWindowReport] = None
    flags: List[str] = []
    config: Dict[str, Any]
    environment: EnvironmentStamp

    @property
    def failed_checks(self) -> List[CheckRecord]:
        return [check for suite in self.suites for check in suite.checks if not check.passed]
