import argparse

from loguru import logger

from orbit.data_structures.enums import CheckSuite, ExitCode
from orbit.dependencies import get_element_store, get_property_checker
from orbit.settings import RunConfig

DEFAULT_INJECTED_CHECK = "symplectic.closure"


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]):
    parser = subparsers.add_parser("check", parents=parents, help="run the randomized invariant suites")
    parser.add_argument("--suite", choices=[suite.value for suite in CheckSuite], default=CheckSuite.ALL.value)
    parser.add_argument(
        "--inject-violation",
        dest="inject_violation",
        nargs="?",
        const=DEFAULT_INJECTED_CHECK,
        default=None,
        metavar="CHECK",
        help=f"corrupt the samples of CHECK (default {DEFAULT_INJECTED_CHECK}) so that it must fail"
    )
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace, settings: RunConfig) -> int:
    if settings.gamma == 0:
        logger.error("The orbit checks need gamma != 0")
        return ExitCode.USAGE

    suite = CheckSuite(args.suite)
    report = get_property_checker(settings).run(suite, inject_violation=args.inject_violation)

    get_element_store().emit(report, settings.output_path)

    if not report.passed:
        logger.error(f"Failed checks: {', '.join(report.failed_checks)}")
        return ExitCode.CHECK_FAILED

    return ExitCode.SUCCESS
