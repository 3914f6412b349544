# Import all schemas to make them available for import
from .report import (
    RatioRecord, SlopeWindowReport, CheckRecord, SuiteResult, EnvironmentStamp, VerificationReport
)
from .campaign import CampaignConfig, load_angles_file

__all__ = [
    # Report schemas
    "RatioRecord", "SlopeWindowReport", "CheckRecord", "SuiteResult", "EnvironmentStamp",
    "VerificationReport",

    # Campaign configuration
    "CampaignConfig", "load_angles_file",
]
