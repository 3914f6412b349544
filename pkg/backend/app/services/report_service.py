"""
Report assembly and output: report.json, table_<suite>.csv and the environment stamp
"""

import logging
import platform
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import scipy

from .. import __version__
from ..config.workbench_constants import CSV_FLOAT_FORMAT, REPORT_FILE
from ..domain.exceptions import OutputError
from ..domain.schemas.campaign import CampaignConfig
from ..domain.schemas.report import EnvironmentStamp, SlopeWindowReport, SuiteResult, VerificationReport

logger = logging.getLogger(__name__)

PACKAGE_NAME = "lacunary-workbench"


def environment_stamp() -> EnvironmentStamp:
    return EnvironmentStamp(
        package=PACKAGE_NAME,
        package_version=__version__,
        python_version=platform.python_version(),
        numpy_version=np.__version__,
        scipy_version=scipy.__version__,
        pandas_version=pd.__version__,
    )


def build_report(command: str, config: CampaignConfig, suites: Optional[List[SuiteResult]] = None,
                 slope_window: Optional[SlopeWindowReport] = None) -> VerificationReport:
    suites = suites or []
    flags = [warning for suite in suites for warning in suite.warnings]
    flags.append("Lemma 2 constants depend on m0 as well as mu; m0 is exposed explicitly")
    passed = all(suite.passed for suite in suites)
    if slope_window is not None:
        passed = passed and slope_window.valid
    return VerificationReport(
        command=command,
        passed=passed,
        suites=suites,
        slope_window=slope_window,
        flags=flags,
        config=config.echo(),
        environment=environment_stamp(),
    )


def _ensure_dir(out_dir: str) -> Path:
    target = Path(out_dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"Cannot create output directory {target}: {exc}") from exc
    return target


def write_report(report: VerificationReport, out_dir: str) -> Path:
    path = _ensure_dir(out_dir) / REPORT_FILE
    try:
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot write report {path}: {exc}") from exc
    logger.info("Report written to %s", path)
    return path


def rows_to_csv(rows: List[Dict], path: Path) -> Path:
    frame = pd.DataFrame(rows)
    try:
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as exc:
        raise OutputError(f"Cannot write table {path}: {exc}") from exc
    return path


def write_tables(suites: List[SuiteResult], out_dir: str) -> List[Path]:
    """One CSV per suite with rows, columns ordered as produced"""
    target = _ensure_dir(out_dir)
    written = []
    for suite in suites:
        if not suite.rows:
            continue
        name = suite.suite.replace("-", "_")
        written.append(rows_to_csv(suite.rows, target / f"table_{name}.csv"))
    return written
