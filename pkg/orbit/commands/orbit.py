import argparse
from pathlib import Path

from orbit.data_structures.enums import ExitCode
from orbit.data_structures.models import SymplecticElement
from orbit.dependencies import get_coadjoint_orbit, get_element_store
from orbit.settings import RunConfig


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]):
    parser = subparsers.add_parser("orbit", parents=parents, help="map a group element to its orbit point")
    parser.add_argument("element", type=Path, help="JSON file holding a SymplecticElement")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace, settings: RunConfig) -> int:
    store = get_element_store()
    element = store.load(args.element, SymplecticElement)

    point = get_coadjoint_orbit(settings).orbit_point(element, settings.gamma)
    store.emit(point, settings.output_path)

    return ExitCode.SUCCESS
