from functools import lru_cache

from orbit.services.coadjoint_orbit import CoadjointOrbit
from orbit.services.element_store import ElementStore
from orbit.services.numerics_kernel import NumericsKernel
from orbit.services.polarized_space import PolarizedSpace
from orbit.services.property_checker import PropertyChecker
from orbit.services.siegel_disc import SiegelDisc
from orbit.services.symplectic_group import SymplecticGroup
from orbit.settings import RunConfig


@lru_cache
def get_settings() -> RunConfig:
    return RunConfig()


def get_numerics_kernel(settings: RunConfig) -> NumericsKernel:
    return NumericsKernel(tolerances=settings.tolerances)


def get_polarized_space(settings: RunConfig) -> PolarizedSpace:
    return PolarizedSpace(kernel=get_numerics_kernel(settings))


def get_symplectic_group(settings: RunConfig) -> SymplecticGroup:
    kernel = get_numerics_kernel(settings)

    return SymplecticGroup(
        kernel=kernel,
        polarized_space=PolarizedSpace(kernel=kernel),
        tolerances=settings.tolerances
    )


def get_siegel_disc(settings: RunConfig) -> SiegelDisc:
    symplectic_group = get_symplectic_group(settings)

    return SiegelDisc(
        kernel=symplectic_group.kernel,
        polarized_space=symplectic_group.polarized_space,
        symplectic_group=symplectic_group,
        tolerances=settings.tolerances
    )


def get_coadjoint_orbit(settings: RunConfig) -> CoadjointOrbit:
    siegel_disc = get_siegel_disc(settings)

    return CoadjointOrbit(
        kernel=siegel_disc.kernel,
        polarized_space=siegel_disc.polarized_space,
        symplectic_group=siegel_disc.symplectic_group,
        siegel_disc=siegel_disc,
        tolerances=settings.tolerances
    )


def get_property_checker(settings: RunConfig) -> PropertyChecker:
    coadjoint_orbit = get_coadjoint_orbit(settings)

    return PropertyChecker(
        kernel=coadjoint_orbit.kernel,
        polarized_space=coadjoint_orbit.polarized_space,
        symplectic_group=coadjoint_orbit.symplectic_group,
        siegel_disc=coadjoint_orbit.siegel_disc,
        coadjoint_orbit=coadjoint_orbit,
        settings=settings
    )


def get_element_store() -> ElementStore:
    return ElementStore()
