import os

import numpy as np
import pytest

from orbit.data_structures.models import SpAlgebraElement, SymplecticElement
from orbit.dependencies import (
    get_coadjoint_orbit,
    get_numerics_kernel,
    get_polarized_space,
    get_settings,
    get_siegel_disc,
    get_symplectic_group
)
from orbit.settings import RunConfig

DIMENSIONS = [1, 2, 4, 8, 16]


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    for key in list(os.environ):
        if key.startswith("ORBIT_"):
            monkeypatch.delenv(key)

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings() -> RunConfig:
    return RunConfig(_env_file=None)


@pytest.fixture
def kernel(settings):
    return get_numerics_kernel(settings)


@pytest.fixture
def polarized_space(settings):
    return get_polarized_space(settings)


@pytest.fixture
def symplectic_group(settings):
    return get_symplectic_group(settings)


@pytest.fixture
def siegel_disc(settings):
    return get_siegel_disc(settings)


@pytest.fixture
def coadjoint_orbit(settings):
    return get_coadjoint_orbit(settings)


def hyperbolic(t: float) -> SymplecticElement:
    return SymplecticElement(n=1, g=[[np.cosh(t)]], h=[[np.sinh(t)]])


def hyperbolic_sigma(t: float) -> np.ndarray:
    c, s = np.cosh(2 * t), np.sinh(2 * t)
    return np.array([[1j * (c - 1), -1j * s], [1j * s, -1j * (c - 1)]])


def scalar_algebra(a2: complex) -> SpAlgebraElement:
    return SpAlgebraElement(n=1, a1=[[0.0]], a2=[[a2]])


def random_scale(n: int) -> float:
    return 0.5 / np.sqrt(n)
