import numpy as np
import pytest

from orbit.data_structures.models import SpAlgebraElement, SymplecticElement
from orbit.services.symplectic_group import SymplecticGroupException, SymplecticMembershipError
from tests.conftest import DIMENSIONS, hyperbolic, random_scale


def test_omega_on_basis_vectors(symplectic_group):
    plus, minus = np.array([1.0, 0.0]), np.array([0.0, 1.0])

    assert symplectic_group.omega_eval(plus, minus) == pytest.approx(-1j)
    assert symplectic_group.omega_eval(minus, plus) == pytest.approx(1j)


def test_omega_rejects_odd_length_vectors(symplectic_group):
    with pytest.raises(SymplecticGroupException):
        symplectic_group.omega_eval(np.ones(3), np.ones(3))


def test_identity_and_hyperbolic_elements_are_symplectic(symplectic_group):
    assert symplectic_group.is_symplectic(SymplecticElement.identity(3)).is_member

    membership = symplectic_group.is_symplectic(hyperbolic(0.4))

    assert membership.is_member
    assert membership.residuals["form"] < 1e-14


def test_scaled_identity_is_not_symplectic(symplectic_group):
    element = SymplecticElement(n=2, g=2 * np.eye(2), h=np.zeros((2, 2)))

    assert not symplectic_group.is_symplectic(element).is_member

    with pytest.raises(SymplecticMembershipError):
        symplectic_group.symplectic_inverse(element)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_products_and_inverses_stay_in_the_group(symplectic_group, n):
    a = symplectic_group.random_symplectic(n, random_scale(n), seed=n)
    b = symplectic_group.random_symplectic(n, random_scale(n), seed=n + 1000)

    product = symplectic_group.compose(a, b)
    inverse = symplectic_group.symplectic_inverse(a)

    assert symplectic_group.is_symplectic(product).is_member
    assert symplectic_group.is_symplectic(inverse).is_member
    assert np.allclose(symplectic_group.compose(a, inverse).to_array(), np.eye(2 * n), atol=1e-9)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_group_elements_preserve_omega(symplectic_group, n):
    rng = np.random.default_rng(n)
    a = symplectic_group.random_symplectic(n, random_scale(n), seed=rng).to_array()
    u = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
    v = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)

    before = symplectic_group.omega_eval(u, v)
    after = symplectic_group.omega_eval(a @ u, a @ v)

    assert abs(after - before) <= 1e-9 * max(1.0, np.linalg.norm(u) * np.linalg.norm(v))


@pytest.mark.parametrize("n", DIMENSIONS)
def test_derived_identities_and_index_zero(symplectic_group, n):
    a = symplectic_group.random_symplectic(n, random_scale(n), seed=2 * n)

    assert max(symplectic_group.derived_identity_residuals(a).values()) < 1e-9
    assert symplectic_group.index_zero_margin(a) >= -1e-12


def test_random_sp_algebra_is_in_the_algebra_and_reproducible(symplectic_group):
    first = symplectic_group.random_sp_algebra(3, 0.5, seed=7)
    second = symplectic_group.random_sp_algebra(3, 0.5, seed=7)

    assert symplectic_group.is_sp_algebra(first).is_member
    assert np.array_equal(first.a1, second.a1)
    assert np.array_equal(first.a2, second.a2)


def test_random_sp_algebra_rejects_negative_scale(symplectic_group):
    with pytest.raises(SymplecticGroupException):
        symplectic_group.random_sp_algebra(2, -1.0)


def test_exp_to_group_rejects_elements_outside_the_algebra(symplectic_group):
    not_skew = SpAlgebraElement(n=1, a1=[[1.0]], a2=[[0.0]])

    with pytest.raises(SymplecticMembershipError):
        symplectic_group.exp_to_group(not_skew)


def test_exp_of_off_diagonal_generator_is_hyperbolic(symplectic_group):
    element = symplectic_group.exp_to_group(SpAlgebraElement(n=1, a1=[[0.0]], a2=[[0.4]]))

    assert element.g[0, 0] == pytest.approx(np.cosh(0.4), abs=1e-14)
    assert element.h[0, 0] == pytest.approx(np.sinh(0.4), abs=1e-14)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_exp_of_negative_generator_is_the_inverse(symplectic_group, n):
    a = symplectic_group.random_sp_algebra(n, random_scale(n), seed=n)

    product = symplectic_group.compose(symplectic_group.exp_to_group(a), symplectic_group.exp_to_group(a.scaled(-1.0)))

    assert np.allclose(product.to_array(), np.eye(2 * n), atol=1e-8)


def test_unitary_isotropy_elements_are_symplectic(symplectic_group):
    u = symplectic_group.random_unitary_isotropy(4, seed=1)

    assert symplectic_group.is_symplectic(u).is_member
    assert not u.h.any()


def test_members_are_fixed_by_conjugation(symplectic_group):
    a = symplectic_group.random_symplectic(3, 0.3, seed=5)

    assert symplectic_group.real_form_residual(a.to_block()) == 0.0
