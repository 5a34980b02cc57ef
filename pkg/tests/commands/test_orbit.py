import json

import numpy as np

from orbit.data_structures.models import ExtendedPredual, SymplecticElement
from orbit.main import run


def _write(path, model):
    path.write_text(model.model_dump_json(by_alias=True))
    return str(path)


def test_identity_maps_to_base_point(tmp_path, capsys):
    element = _write(tmp_path / "identity.json", SymplecticElement.identity(3))

    assert run(["orbit", element, "--n", "3", "--gamma", "2"]) == 0

    point = ExtendedPredual.model_validate_json(capsys.readouterr().out)

    assert np.allclose(point.mu.to_array(), 0)
    assert point.gamma == 2


def test_generated_element_round_trips_through_the_disc(tmp_path, capsys, coadjoint_orbit):
    target = tmp_path / "element.json"
    run(["gen", "symplectic", "--n", "2", "--seed", "9", "--out", str(target)])

    assert run(["orbit", str(target), "--n", "2"]) == 0

    point = ExtendedPredual.model_validate_json(capsys.readouterr().out)
    element = SymplecticElement.model_validate_json(target.read_text())
    expected = coadjoint_orbit.orbit_point(element, 1.0)

    assert np.allclose(point.mu.to_array(), expected.mu.to_array())


def test_non_symplectic_input_is_rejected(tmp_path):
    element = _write(tmp_path / "bad.json", SymplecticElement(n=1, g=[[1.0]], h=[[0.5]]))

    assert run(["orbit", element]) == 2


def test_missing_file_is_rejected(tmp_path):
    assert run(["orbit", str(tmp_path / "missing.json")]) == 2


def test_malformed_file_is_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"n": 1, "g": "not a matrix"}))

    assert run(["orbit", str(path)]) == 2
