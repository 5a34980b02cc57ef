import argparse
from pathlib import Path

from loguru import logger

from orbit.data_structures.enums import ExitCode
from orbit.data_structures.models import FormsReport, SpAlgebraElement
from orbit.dependencies import get_coadjoint_orbit, get_element_store
from orbit.settings import RunConfig


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]):
    parser = subparsers.add_parser("forms", parents=parents, help="compare the orbit and disc symplectic forms")
    parser.add_argument("a_file", type=Path, help="JSON file holding the first SpAlgebraElement")
    parser.add_argument("b_file", type=Path, help="JSON file holding the second SpAlgebraElement")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace, settings: RunConfig) -> int:
    """
    Evaluates omega_D(0), the pulled-back orbit form, the KKS form and their -4 gamma residual
    on a pair of algebra elements. A degenerate pair is reported, not treated as a failure.
    """

    store = get_element_store()
    a = store.load(args.a_file, SpAlgebraElement)
    b = store.load(args.b_file, SpAlgebraElement)

    check = get_coadjoint_orbit(settings).symplecto_check(a, b, settings.gamma)

    report = FormsReport(
        omega_d=check.omega_d,
        omega_hat=check.omega_hat,
        kks=check.kks,
        ratio=check.ratio,
        residual=check.residual,
        degenerate=check.inconclusive,
        gamma=settings.gamma
    )
    store.emit(report, settings.output_path)

    if not check.passed:
        logger.error(f"omega_hat differs from {check.constant} * omega_D by {check.residual:.3e}")
        return ExitCode.CHECK_FAILED

    return ExitCode.SUCCESS
