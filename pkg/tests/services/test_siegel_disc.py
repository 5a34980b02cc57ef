import numpy as np
import pytest

from orbit.data_structures.models import SiegelPoint, SiegelTangent, SymplecticElement
from orbit.services.numerics_kernel import SpectrumDomainError
from orbit.services.siegel_disc import DiscMembershipError
from tests.conftest import DIMENSIONS, hyperbolic, random_scale, scalar_algebra


def scalar_point(z: complex) -> SiegelPoint:
    return SiegelPoint(n=1, z=[[z]])


def scalar_tangent(v: complex) -> SiegelTangent:
    return SiegelTangent(n=1, v=[[v]])


def origin(n: int) -> SiegelPoint:
    return SiegelPoint(n=n, z=np.zeros((n, n)))


def test_siegel_contains(siegel_disc):
    assert siegel_disc.siegel_contains(np.zeros((2, 2))).is_member

    inside = siegel_disc.siegel_contains(np.array([[0.5]]))
    assert inside.is_member
    assert inside.min_eigenvalue == pytest.approx(0.75)
    assert inside.dual_min_eigenvalue == pytest.approx(0.75)

    assert not siegel_disc.siegel_contains(np.array([[1.0]])).is_member
    assert not siegel_disc.siegel_contains(np.array([[0.0, 0.1], [0.0, 0.0]])).is_member

    outside = siegel_disc.siegel_contains(np.array([[2.0]]))
    assert outside.min_eigenvalue == pytest.approx(-3.0)
    assert outside.dual_min_eigenvalue == pytest.approx(-3.0)


def test_point_and_tangent_validate_their_input(siegel_disc):
    with pytest.raises(DiscMembershipError):
        siegel_disc.point(np.array([[1.2]]))

    with pytest.raises(DiscMembershipError):
        siegel_disc.tangent(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_metric_at_scalar_point(siegel_disc):
    value = siegel_disc.siegel_metric(scalar_point(0.5), scalar_tangent(1.0), scalar_tangent(1.0))

    assert value == pytest.approx(16 / 9, abs=1e-12)


def test_kahler_form_at_origin(siegel_disc):
    value = siegel_disc.siegel_kahler(origin(1), scalar_tangent(1.0), scalar_tangent(1j))

    assert value == pytest.approx(-1.0, abs=1e-12)


def test_origin_and_coset_forms_agree(siegel_disc):
    a, b = scalar_algebra(1.0), scalar_algebra(1j)

    assert siegel_disc.origin_metric(scalar_tangent(1.0), scalar_tangent(1j)) == pytest.approx(-1j)
    assert siegel_disc.coset_metric(a, b) == pytest.approx(-1j)
    assert siegel_disc.coset_kahler(a, b) == pytest.approx(-1.0)


def test_hyperbolic_element_moves_origin_to_tanh(siegel_disc):
    image = siegel_disc.mobius_act(hyperbolic(0.4), origin(1))

    assert image.z[0, 0] == pytest.approx(np.tanh(0.4), abs=1e-14)


def test_mobius_act_rejects_points_outside_the_disc(siegel_disc):
    with pytest.raises(DiscMembershipError):
        siegel_disc.mobius_act(SymplecticElement.identity(1), scalar_point(1.5))


def test_non_symplectic_elements_do_not_act(siegel_disc):
    a = SymplecticElement(n=1, g=[[1.0]], h=[[2.0]])

    with pytest.raises(DiscMembershipError):
        siegel_disc.mobius_act(a, origin(1))

    with pytest.raises(DiscMembershipError):
        siegel_disc.mobius_tangent(a, origin(1), scalar_tangent(1.0))

    with pytest.raises(DiscMembershipError):
        siegel_disc.coset_to_disc(a)


def test_identity_leaves_tangents_unchanged(siegel_disc):
    point = siegel_disc.random_point(3, seed=4)
    tangent = siegel_disc.random_tangent(3, seed=5)

    pushed = siegel_disc.mobius_tangent(SymplecticElement.identity(3), point, tangent)

    assert np.allclose(pushed.v, tangent.v, atol=1e-12)


def test_pushforward_at_origin_for_hyperbolic_element(siegel_disc):
    pushed = siegel_disc.mobius_tangent(hyperbolic(0.4), origin(1), scalar_tangent(1.0))

    assert pushed.v[0, 0] == pytest.approx(1 / np.cosh(0.4) ** 2, abs=1e-12)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_pushforward_at_origin(siegel_disc, n):
    a = siegel_disc.symplectic_group.random_symplectic(n, random_scale(n), seed=n + 7)
    tangent = siegel_disc.random_tangent(n, seed=n)

    pushed = siegel_disc.mobius_tangent(a, origin(n), tangent).v
    expected = np.linalg.inv(a.g.conj().T) @ tangent.v @ np.linalg.inv(a.g.conj())

    assert np.linalg.norm(pushed - expected) <= 1e-10 * max(1.0, np.linalg.norm(expected))


@pytest.mark.parametrize("n", DIMENSIONS)
def test_action_law(siegel_disc, n):
    group = siegel_disc.symplectic_group
    a = group.random_symplectic(n, random_scale(n), seed=n)
    b = group.random_symplectic(n, random_scale(n), seed=n + 500)
    point = siegel_disc.random_point(n, seed=n)

    sequential = siegel_disc.mobius_act(a, siegel_disc.mobius_act(b, point))
    combined = siegel_disc.mobius_act(group.compose(a, b), point)

    assert np.linalg.norm(sequential.z - combined.z) < 1e-8


@pytest.mark.parametrize("n", DIMENSIONS)
def test_unitary_isotropy_acts_by_congruence(siegel_disc, n):
    u = siegel_disc.symplectic_group.random_unitary_isotropy(n, seed=n)
    point = siegel_disc.random_point(n, seed=n)

    assert not siegel_disc.mobius_act(u, origin(n)).z.any()
    assert np.allclose(siegel_disc.mobius_act(u, point).z, u.g @ point.z @ u.g.T, atol=1e-10)


def test_transitive_generator_of_scalar_point(siegel_disc):
    generator = siegel_disc.transitive_generator(scalar_point(0.5))

    assert generator[0, 0] == pytest.approx(np.arctanh(0.5), abs=1e-14)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_transitivity(siegel_disc, n):
    point = siegel_disc.random_point(n, seed=n)
    element = siegel_disc.transitive_element(point)

    assert np.linalg.norm(siegel_disc.mobius_act(element, origin(n)).z - point.z) < 1e-8


@pytest.mark.parametrize("n", DIMENSIONS)
def test_transitivity_near_the_boundary(siegel_disc, n):
    point = siegel_disc.random_point_on_sphere(n, seed=n, norm=0.99)
    element = siegel_disc.transitive_element(point)

    assert np.linalg.norm(siegel_disc.mobius_act(element, origin(n)).z - point.z) < 1e-6


def test_transitive_generator_rejects_points_at_the_boundary(siegel_disc):
    with pytest.raises(SpectrumDomainError):
        siegel_disc.transitive_generator(scalar_point(1 - 1e-9))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_series_oracle_matches_spectral_generator(siegel_disc, n):
    point = siegel_disc.random_point(n, seed=n)

    spectral = siegel_disc.transitive_generator(point)
    series = siegel_disc.transitive_generator_series(point)

    assert np.allclose(spectral, series, atol=1e-9)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_coset_to_disc_is_the_image_of_the_origin(siegel_disc, n):
    group = siegel_disc.symplectic_group
    a = group.random_symplectic(n, random_scale(n), seed=n)
    u = group.random_unitary_isotropy(n, seed=n)

    z = siegel_disc.coset_to_disc(a).z

    assert np.allclose(z, siegel_disc.mobius_act(a, origin(n)).z, atol=1e-10)
    assert np.allclose(z, siegel_disc.coset_to_disc(group.compose(a, u)).z, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_pushforward_matches_finite_differences(siegel_disc, n):
    a = siegel_disc.symplectic_group.random_symplectic(n, random_scale(n), seed=n)
    point = siegel_disc.random_point(n, seed=n)
    tangent = siegel_disc.random_tangent(n, seed=n + 1)
    step = 1e-5

    forward = siegel_disc.mobius_act(a, SiegelPoint(n=n, z=point.z + step * tangent.v))
    backward = siegel_disc.mobius_act(a, SiegelPoint(n=n, z=point.z - step * tangent.v))
    pushed = siegel_disc.mobius_tangent(a, point, tangent).v

    assert np.linalg.norm((forward.z - backward.z) / (2 * step) - pushed) <= 1e-6 * max(1.0, np.linalg.norm(pushed))


@pytest.mark.parametrize("n", DIMENSIONS)
def test_metric_and_kahler_form_are_invariant(siegel_disc, n):
    a = siegel_disc.symplectic_group.random_symplectic(n, random_scale(n), seed=n)
    point = siegel_disc.random_point(n, seed=n)
    u, v = siegel_disc.random_tangent(n, seed=1), siegel_disc.random_tangent(n, seed=2)

    before = siegel_disc.siegel_metric(point, u, v)
    after = siegel_disc.siegel_metric(
        siegel_disc.mobius_act(a, point),
        siegel_disc.mobius_tangent(a, point, u),
        siegel_disc.mobius_tangent(a, point, v)
    )

    assert abs(after - before) <= 1e-7 * max(1.0, abs(before))
    assert abs(after.imag - before.imag) <= 1e-7 * max(1.0, abs(before))


@pytest.mark.parametrize("n", DIMENSIONS)
def test_metric_is_positive(siegel_disc, n):
    point = siegel_disc.random_point(n, seed=n)
    u = siegel_disc.random_tangent(n, seed=n)

    value = siegel_disc.siegel_metric(point, u, u)

    assert value.real > 0
    assert abs(value.imag) <= 1e-10 * value.real


def test_zz_transpose_identity(siegel_disc):
    assert siegel_disc.zz_transpose_residual(siegel_disc.random_point(5, seed=3)) < 1e-12


def test_sp2_distance(siegel_disc):
    assert siegel_disc.sp2_distance(SymplecticElement.identity(2)) == 0.0
    assert siegel_disc.sp2_distance(hyperbolic(0.4)) == pytest.approx(
        np.sqrt(2 * (np.cosh(0.4) - 1) ** 2 + 2 * np.sinh(0.4) ** 2)
    )
