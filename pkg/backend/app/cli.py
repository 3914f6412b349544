"""
Command-line frontend for the lacunary rectangle workbench

    python -m backend.app validate-sequence [--config FILE] [flags]
    python -m backend.app verify <suite|all> [flags]
    python -m backend.app blowup-table [flags]
    python -m backend.app figures [--level K] [flags]
    python -m backend.app schema [--out DIR]

Exit codes: 0 all selected checks pass, 1 a check failed (artifacts still
written), 2 configuration or validation error, 3 I/O error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .config.settings import settings
from .config.workbench_constants import SUITES
from .domain.exceptions import BilacunarityError, ConstructionError, DomainError, OutputError
from .domain.schemas.campaign import CampaignConfig
from .domain.schemas.report import SuiteResult, VerificationReport
from .services import report_service
from .services.construction_service import ConstructionService
from .services.figure_service import write_figures
from .services.lacunary_validator import LacunaryValidator
from .services.verification_service import VerificationService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3

SCHEMA_FILE = "verification_report.schema.json"
BLOWUP_TABLE = "table_blowup.csv"

# CLI flag -> CampaignConfig field
FLAG_FIELDS = {
    "theta0": "theta0",
    "sigma": "sigma",
    "lam": "lam",
    "mu": "mu",
    "prefix": "prefix",
    "max_reindex": "max_reindex",
    "k_max": "k_max",
    "seed": "seed",
    "samples": "samples",
    "phi": "phi",
    "scale_c": "scale_c",
    "resolution": "pixel_resolution",
    "angles_file": "explicit_angles_file",
    "out": "output_dir",
}

console = Console(stderr=True)


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _campaign_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("campaign")
    group.add_argument("--config", help="flat key = value campaign file")
    group.add_argument("--theta0", type=float, help="first angle of the geometric sequence")
    group.add_argument("--sigma", type=float, help="ratio of the geometric sequence")
    group.add_argument("--angles-file", help="explicit angle list, one radian value per line")
    group.add_argument("--lambda", dest="lam", type=float, help="lower envelope lambda")
    group.add_argument("--mu", type=float, help="upper envelope mu")
    group.add_argument("--prefix", type=int, help="number of angles validated")
    group.add_argument("--max-reindex", type=int, help="largest admissible reindexing point j0")
    group.add_argument("--k-max", type=int, help="largest level K (at most 40)")
    group.add_argument("--seed", type=int, help="base seed")
    group.add_argument("--samples", type=int, help="Monte Carlo samples for union areas")
    group.add_argument("--phi", help="Orlicz function: power:p or loglike:g")
    group.add_argument("--C", dest="scale_c", type=float, help="scale C in the divergence ratio")
    group.add_argument("--resolution", type=int, help="pixel resolution of axis-parallel level sets")
    group.add_argument("--remark", action="store_true", default=None,
                       help="use the family without growth condition")
    group.add_argument("--out", help="output directory")
    group.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lacunary-workbench",
        description="Verification workbench for lacunary rotated-rectangle bases",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate-sequence", help="validate the slope envelope and print it as JSON")
    _campaign_flags(validate)

    verify = commands.add_parser("verify", help="run verification suites and write report.json and CSV tables")
    verify.add_argument("suite", choices=list(SUITES) + ["all"])
    _campaign_flags(verify)

    blowup = commands.add_parser("blowup-table", help="rotated versus axis-parallel weak-type table")
    _campaign_flags(blowup)

    figures = commands.add_parser("figures", help="write fig1.svg and fig2.svg")
    figures.add_argument("--level", type=int, default=2, help="construction level drawn")
    _campaign_flags(figures)

    schema = commands.add_parser("schema", help="print or write the report JSON schema")
    schema.add_argument("--out", help="directory receiving the schema file")
    schema.add_argument("--log-level", default=None)
    return parser


def load_config(args: argparse.Namespace) -> CampaignConfig:
    overrides: Dict[str, Any] = {}
    for flag, field in FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if getattr(args, "remark", None):
        overrides["remark"] = True
    env_output_dir = settings.output_dir if getattr(args, "out", None) is None else None
    return CampaignConfig.from_sources(
        config_file=getattr(args, "config", None),
        overrides=overrides,
        env_output_dir=env_output_dir,
    )


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return "" if value is None else str(value)


def render_suites(suites: List[SuiteResult]) -> None:
    table = Table(title="Verification summary")
    table.add_column("Suite", style="cyan")
    table.add_column("Checks", justify="right")
    table.add_column("Failed", justify="right")
    table.add_column("Result")
    for suite in suites:
        failed = sum(not check.passed for check in suite.checks)
        table.add_row(
            suite.suite,
            str(len(suite.checks)),
            str(failed),
            "[green]pass[/green]" if suite.passed else "[red]FAIL[/red]",
        )
    console.print(table)


def render_rows(title: str, rows: List[Dict[str, Any]]) -> None:
    if not rows:
        return
    table = Table(title=title)
    for column in rows[0]:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*(_fmt(row.get(column)) for column in rows[0]))
    console.print(table)


def cmd_validate_sequence(config: CampaignConfig) -> int:
    report = LacunaryValidator.inspect(config.sequence(), config.prefix, max_j0=config.max_reindex)
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    if not report.valid:
        for error in report.errors:
            logger.error(error)
        return EXIT_CHECK_FAILED
    logger.info("Envelope holds from j0=%d over %d angles", report.j0, report.prefix)
    return EXIT_OK


def cmd_verify(config: CampaignConfig, which: str) -> int:
    service = VerificationService(config)
    window_report = LacunaryValidator.inspect(service.sequence, service.prefix, max_j0=config.max_reindex)
    suites = service.run(which)
    report = report_service.build_report(f"verify {which}", config, suites, window_report)
    report_service.write_report(report, config.output_dir)
    report_service.write_tables(suites, config.output_dir)
    render_suites(suites)
    for check in report.failed_checks:
        logger.error("Failed %s/%s (k=%s): %s", check.suite, check.name, check.k, check.computed)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_blowup_table(config: CampaignConfig) -> int:
    service = VerificationService(config)
    rows = service.blowup_rows()
    target = Path(config.output_dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"Cannot create output directory {target}: {exc}") from exc
    path = report_service.rows_to_csv(rows, target / BLOWUP_TABLE)
    render_rows("Weak-type contrast", rows)
    logger.info("Blowup table written to %s", path)
    return EXIT_OK


def cmd_figures(config: CampaignConfig, level_index: int) -> int:
    window = LacunaryValidator.validate_bilacunary(
        config.sequence(), max(config.prefix, level_index + 1), max_j0=config.max_reindex
    )
    consts = ConstructionService.constants_for_window(window)
    family = ConstructionService.build_nested_family(level_index, window, consts)
    paths = write_figures(family.level(level_index), config.output_dir)
    for name, path in paths.items():
        logger.info("%s -> %s", name, path)
    return EXIT_OK


def cmd_schema(out_dir: Optional[str]) -> int:
    text = json.dumps(VerificationReport.model_json_schema(), indent=2, sort_keys=True) + "\n"
    if out_dir is None:
        sys.stdout.write(text)
        return EXIT_OK
    target = Path(out_dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
        (target / SCHEMA_FILE).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot write schema to {target}: {exc}") from exc
    return EXIT_OK


def dispatch(args: argparse.Namespace) -> int:
    if args.command == "schema":
        return cmd_schema(args.out)
    config = load_config(args)
    if args.command == "validate-sequence":
        return cmd_validate_sequence(config)
    if args.command == "verify":
        return cmd_verify(config, args.suite)
    if args.command == "blowup-table":
        return cmd_blowup_table(config)
    return cmd_figures(config, args.level)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or settings.log_level)
    try:
        return dispatch(args)
    except ValidationError as exc:
        for error in exc.errors():
            location = ".".join(str(part) for part in error["loc"]) or "config"
            logger.error("Invalid configuration %s: %s", location, error["msg"])
        return EXIT_CONFIG_ERROR
    except (BilacunarityError, ConstructionError, DomainError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG_ERROR
    except OutputError as exc:
        logger.error("%s", exc)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
