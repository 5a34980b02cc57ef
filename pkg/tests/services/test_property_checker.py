import pytest

from orbit.data_structures.enums import CheckSuite, CompositionOrder
from orbit.dependencies import get_property_checker
from orbit.services.property_checker import PropertyCheckerException
from orbit.settings import RunConfig


def checker_for(**overrides):
    return get_property_checker(RunConfig(_env_file=None, **overrides))


@pytest.mark.parametrize("suite", [suite for suite in CheckSuite if suite != CheckSuite.ALL])
@pytest.mark.parametrize("n", [1, 3])
def test_suites_pass_on_valid_samples(suite, n):
    report = checker_for(n=n, trials=3).run(suite)

    assert report.passed, report.failed_checks
    assert report.suite == suite.value
    assert all(record.trials == 3 for record in report.records)


@pytest.mark.parametrize("n", [1, 4])
def test_general_group_elements_move_the_base_point(n):
    report = checker_for(n=n, trials=20, seed=5).run(CheckSuite.COADJOINT)
    record = next(record for record in report.records if record.name == "coadjoint.non_isotropy_moves")

    assert record.passed
    assert record.trials == 20
    assert record.error is None


def test_all_suite_runs_every_check_in_registration_order():
    checker = checker_for(n=2, trials=2)

    report = checker.run(CheckSuite.ALL)

    assert [record.name for record in report.records] == [check.name for check in checker.checks]
    assert report.passed, report.failed_checks


@pytest.mark.parametrize("name", ["symplectic.closure", "siegel.transitivity", "coadjoint.symplectomorphism",
                                  "coadjoint.isotropy_fixed"])
def test_injected_violation_fails_only_the_named_check(name):
    suite = CheckSuite(name.split(".")[0])

    report = checker_for(n=2, trials=2).run(suite, inject_violation=name)

    assert not report.passed
    assert report.failed_checks == [name]
    assert report.config["inject_violation"] == name


def test_every_injectable_check_fails_when_corrupted():
    checker = checker_for(n=1, trials=1)

    for name in checker.injectable_checks:
        report = checker.run(CheckSuite.ALL, inject_violation=name)
        assert report.failed_checks == [name]


def test_injection_into_unknown_or_non_injectable_check_is_rejected():
    checker = checker_for(trials=1)

    with pytest.raises(PropertyCheckerException):
        checker.run(CheckSuite.ALL, inject_violation="symplectic.nonexistent")

    with pytest.raises(PropertyCheckerException):
        checker.run(CheckSuite.ALL, inject_violation="polarized.conj_involution")

    with pytest.raises(PropertyCheckerException):
        checker.run(CheckSuite.SIEGEL, inject_violation="symplectic.closure")


def test_residuals_do_not_depend_on_worker_count():
    serial = checker_for(n=2, trials=4).run(CheckSuite.SIEGEL)
    parallel = checker_for(n=2, trials=4, workers=3).run(CheckSuite.SIEGEL)

    assert [r.max_residual for r in serial.records] == [r.max_residual for r in parallel.records]


def test_fixed_seed_reproduces_residuals():
    first = checker_for(trials=2, seed=11).run(CheckSuite.COADJOINT)
    second = checker_for(trials=2, seed=11).run(CheckSuite.COADJOINT)

    assert first.model_dump() == second.model_dump()


def test_composition_order_is_determined_once():
    checker = checker_for(trials=1)

    assert checker.composition_order == CompositionOrder.RIGHT
    assert checker.composition_order is checker.composition_order


def test_report_echoes_configuration():
    report = checker_for(n=2, trials=1, seed=5).run(CheckSuite.KERNEL)

    assert report.config["n"] == 2
    assert report.config["seed"] == 5
    assert report.config["tolerances"]["membership"] == 1e-9
    assert "output_path" not in report.config
