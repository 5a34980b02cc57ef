import json

import numpy as np
import pytest

from orbit.data_structures.models import ExtendedAlgebraElement, ExtendedPredual, SymplecticElement
from orbit.services.element_store import ElementStore, ElementStoreException
from tests.conftest import hyperbolic


@pytest.fixture
def store():
    return ElementStore()


def test_dumps_is_deterministic(store, symplectic_group):
    first = symplectic_group.random_symplectic(2, 0.3, seed=9)
    second = symplectic_group.random_symplectic(2, 0.3, seed=9)

    assert store.dumps(first) == store.dumps(second)
    assert store.dumps(first).endswith("\n")


def test_emit_and_load_preserve_the_element(store, tmp_path, symplectic_group):
    element = symplectic_group.random_symplectic(3, 0.3, seed=1)
    path = tmp_path / "element.json"

    store.emit(element, path)
    loaded = store.load(path, SymplecticElement)

    assert np.array_equal(loaded.g, element.g)
    assert np.array_equal(loaded.h, element.h)
    assert store.dumps(loaded) == path.read_text()


def test_emit_without_path_writes_to_stdout(store, capsys):
    store.emit(hyperbolic(0.1))

    document = json.loads(capsys.readouterr().out)

    assert document["n"] == 1
    assert document["g"]["rows"] == 1 and len(document["g"]["entries"]) == 1


def test_complex_scalars_and_aliases_in_json(store, polarized_space):
    element = ExtendedAlgebraElement(op=polarized_space.identity(1), lam=1 - 2j)

    document = json.loads(store.dumps(element))

    assert document["lambda"] == [1.0, -2.0]
    assert store.loads(store.dumps(element), ExtendedAlgebraElement).lam == 1 - 2j


def test_predual_document_layout(store, coadjoint_orbit):
    document = json.loads(store.dumps(coadjoint_orbit.base_point(1, 2.0)))

    assert set(document) == {"mu", "gamma"}
    assert document["gamma"] == [2.0, 0.0]


def test_load_missing_file(store, tmp_path):
    with pytest.raises(ElementStoreException):
        store.load(tmp_path / "missing.json", SymplecticElement)


def test_load_invalid_json(store, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")

    with pytest.raises(ElementStoreException):
        store.load(path, SymplecticElement)


def test_load_document_of_the_wrong_type(store, tmp_path, coadjoint_orbit):
    path = tmp_path / "predual.json"
    store.emit(coadjoint_orbit.base_point(1, 1.0), path)

    with pytest.raises(ElementStoreException):
        store.load(path, SymplecticElement)

    assert isinstance(store.load(path, ExtendedPredual), ExtendedPredual)


def test_emit_to_unwritable_path(store, tmp_path):
    with pytest.raises(ElementStoreException):
        store.emit(hyperbolic(0.1), tmp_path / "missing-dir" / "element.json")
