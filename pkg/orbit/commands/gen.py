import argparse

import numpy as np
from loguru import logger

from orbit.data_structures.enums import ExitCode, GeneratedKind
from orbit.dependencies import get_element_store, get_siegel_disc
from orbit.services.siegel_disc import DiscMembershipError
from orbit.services.symplectic_group import SymplecticMembershipError
from orbit.settings import RunConfig


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]):
    parser = subparsers.add_parser("gen", parents=parents, help="generate a random element as JSON")
    parser.add_argument("kind", choices=[kind.value for kind in GeneratedKind])
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace, settings: RunConfig) -> int:
    """
    Emits a random element of the requested kind; the same seed always gives the same bytes.

    The element is checked against its membership predicate before it is written.
    """

    kind = GeneratedKind(args.kind)
    siegel_disc = get_siegel_disc(settings)
    symplectic_group = siegel_disc.symplectic_group
    scale = settings.sample_scale / np.sqrt(settings.n)

    if kind == GeneratedKind.SP_ALGEBRA:
        element = symplectic_group.random_sp_algebra(settings.n, scale, settings.seed)
        membership = symplectic_group.is_sp_algebra(element)
        if not membership.is_member:
            raise SymplecticMembershipError(f"Generated algebra element failed membership: {membership.residuals}")
    elif kind == GeneratedKind.SYMPLECTIC:
        element = symplectic_group.random_symplectic(settings.n, scale, settings.seed)
        membership = symplectic_group.is_symplectic(element)
        if not membership.is_member:
            raise SymplecticMembershipError(f"Generated group element failed membership: {membership.residuals}")
    else:
        element = siegel_disc.random_point(settings.n, settings.seed)
        membership = siegel_disc.siegel_contains(element)
        if not membership.is_member:
            raise DiscMembershipError(f"Generated disc point failed membership: {membership.model_dump()}")

    logger.info(f"Generated {kind.value} element with n = {settings.n}, seed = {settings.seed}")
    get_element_store().emit(element, settings.output_path)

    return ExitCode.SUCCESS
