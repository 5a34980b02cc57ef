import argparse
import sys
from pathlib import Path

from loguru import logger
from pydantic import ValidationError

from orbit import __version__
from orbit.commands import check, forms, gen
from orbit.commands import orbit as orbit_command
from orbit.data_structures.enums import ExitCode
from orbit.dependencies import get_settings
from orbit.services.element_store import ElementStoreException
from orbit.services.property_checker import DOMAIN_EXCEPTIONS, PropertyCheckerException
from orbit.settings import RunConfig, Tolerances


def initialise_logger(level: str = "WARNING"):
    # stdout carries the JSON documents, so every log line goes to stderr
    logger.remove()
    logger.add(sys.stderr, format="{time} {level} {message}", level=level.upper())


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    common.add_argument("--n", type=int, help="truncation dimension of H+ (default 4)")
    common.add_argument("--gamma", type=float, help="central coordinate of the orbit (default 1.0)")
    common.add_argument("--seed", type=int, help="base seed; falls back to ORBIT_SEED, then 42")
    common.add_argument("--trials", type=int, help="randomized trials per check (default 100)")
    common.add_argument("--workers", type=int, help="thread pool size for property trials (default 1)")
    common.add_argument("--out", type=Path, dest="output_path", help="write the JSON document here instead of stdout")
    common.add_argument("--log-level", dest="log_level", help="stderr log level (default WARNING)")

    for name in Tolerances.model_fields:
        common.add_argument(f"--tol.{name}", dest=f"tol_{name}", type=float, metavar="VALUE")

    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbit",
        description="Numerical verification of the coadjoint orbit / Siegel disc correspondence for Sp_res."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [_common_options()]

    for command in (gen, check, orbit_command, forms):
        command.register(subparsers, parents)

    return parser


def build_settings(args: argparse.Namespace) -> RunConfig:
    """
    Merges CLI flags over the environment: only flags that were given are passed on, so
    ORBIT_-prefixed variables and the .env file fill in the rest.
    """

    overrides = {
        name: getattr(args, name)
        for name in ("n", "gamma", "seed", "trials", "workers", "output_path", "log_level")
        if getattr(args, name) is not None
    }

    tolerances = {
        name: getattr(args, f"tol_{name}")
        for name in Tolerances.model_fields
        if getattr(args, f"tol_{name}") is not None
    }

    if tolerances:
        overrides["tolerances"] = tolerances

    if not overrides:
        return get_settings()

    return RunConfig(**overrides)


def run(argv: list[str] | None = None) -> int:
    """
    Parses `argv`, dispatches to the selected command and maps failures to exit codes.

    Returns
    -------
    int
        0 on success, 1 when a property check fails, 2 on usage, parse or domain errors.
    """

    initialise_logger()
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ExitCode.SUCCESS if e.code in (0, None) else ExitCode.USAGE

    try:
        settings = build_settings(args)
    except ValidationError as e:
        logger.error(f"Invalid configuration - {e}")
        return ExitCode.USAGE

    try:
        initialise_logger(settings.log_level)
    except ValueError as e:
        logger.error(f"Invalid log level - {e}")
        return ExitCode.USAGE

    try:
        return args.handler(args, settings)
    except (ElementStoreException, PropertyCheckerException, *DOMAIN_EXCEPTIONS) as e:
        logger.error(f"{args.command} failed - {type(e).__name__}: {e}")
        return ExitCode.USAGE
    except Exception as e:
        logger.exception(f"Unhandled exception in {args.command} - {e}")
        return ExitCode.USAGE
