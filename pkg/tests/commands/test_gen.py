import json

import numpy as np
import pytest

from orbit.data_structures.models import SiegelPoint, SpAlgebraElement, SymplecticElement
from orbit.main import run


@pytest.mark.parametrize("kind", ["sp-algebra", "symplectic", "siegel-point"])
def test_same_seed_gives_identical_output(capsys, kind):
    assert run(["gen", kind, "--n", "3", "--seed", "11"]) == 0
    first = capsys.readouterr().out

    assert run(["gen", kind, "--n", "3", "--seed", "11"]) == 0
    second = capsys.readouterr().out

    assert first == second


def test_different_seeds_differ(capsys):
    run(["gen", "symplectic", "--n", "2", "--seed", "1"])
    first = capsys.readouterr().out

    run(["gen", "symplectic", "--n", "2", "--seed", "2"])
    second = capsys.readouterr().out

    assert first != second


def test_generated_symplectic_element_is_a_member(capsys, symplectic_group):
    assert run(["gen", "symplectic", "--n", "4", "--seed", "5"]) == 0

    element = SymplecticElement.model_validate_json(capsys.readouterr().out)

    assert element.n == 4
    assert symplectic_group.is_symplectic(element).is_member


def test_generated_algebra_element_is_a_member(capsys, symplectic_group):
    assert run(["gen", "sp-algebra", "--n", "2"]) == 0

    element = SpAlgebraElement.model_validate_json(capsys.readouterr().out)

    assert symplectic_group.is_sp_algebra(element).is_member


def test_siegel_point_for_n_one(capsys, siegel_disc):
    assert run(["gen", "siegel-point", "--n", "1", "--seed", "3"]) == 0

    point = SiegelPoint.model_validate_json(capsys.readouterr().out)

    assert point.z.shape == (1, 1)
    assert abs(point.z[0, 0]) < 1
    assert siegel_disc.siegel_contains(point.z).is_member


def test_output_file(tmp_path, capsys):
    target = tmp_path / "element.json"

    assert run(["gen", "symplectic", "--n", "2", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""

    document = json.loads(target.read_text())
    g = SymplecticElement.model_validate(document).g

    assert np.all(np.isfinite(g))


def test_unknown_kind_is_a_usage_error():
    assert run(["gen", "hermitian"]) == 2


def test_invalid_dimension_is_a_usage_error():
    assert run(["gen", "symplectic", "--n", "0"]) == 2
