import pytest
from pydantic import ValidationError

from orbit.dependencies import get_settings
from orbit.main import build_parser, build_settings
from orbit.settings import RunConfig


def test_defaults():
    settings = RunConfig(_env_file=None)

    assert (settings.n, settings.gamma, settings.seed, settings.trials) == (4, 1.0, 42, 100)
    assert settings.tolerances.membership == 1e-9
    assert settings.tolerances.condition == 1e12


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("ORBIT_SEED", "7")
    monkeypatch.setenv("ORBIT_TOLERANCES__MEMBERSHIP", "1e-8")

    settings = get_settings()

    assert settings.seed == 7
    assert settings.tolerances.membership == 1e-8
    assert settings.tolerances.identity == 1e-10


def test_flags_take_precedence_over_environment(monkeypatch):
    monkeypatch.setenv("ORBIT_SEED", "7")
    monkeypatch.setenv("ORBIT_TOLERANCES__IDENTITY", "1e-11")

    args = build_parser().parse_args(["check", "--seed", "3", "--tol.membership", "1e-7", "--n", "2"])
    settings = build_settings(args)

    assert settings.seed == 3
    assert settings.n == 2
    assert settings.tolerances.membership == 1e-7
    assert settings.tolerances.identity == 1e-11


def test_invalid_values_are_rejected():
    with pytest.raises(ValidationError):
        RunConfig(_env_file=None, n=0)

    with pytest.raises(ValidationError):
        RunConfig(_env_file=None, trials=0)


def test_echo_omits_local_options(tmp_path):
    settings = RunConfig(_env_file=None, output_path=tmp_path / "report.json", workers=4)

    echo = settings.echo()

    assert "output_path" not in echo and "workers" not in echo and "log_level" not in echo
    assert echo["tolerances"]["fd_step"] == 1e-5
