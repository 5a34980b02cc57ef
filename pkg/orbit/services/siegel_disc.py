import numpy as np
from loguru import logger

from orbit.data_structures.models import (
    DiscMembership, SiegelPoint, SiegelTangent, SpAlgebraElement, SymplecticElement
)
from orbit.services.numerics_kernel import NumericsKernel, SpectrumDomainError, artanh_sqrt_ratio
from orbit.services.polarized_space import PolarizedSpace
from orbit.services.symplectic_group import Seed, SymplecticGroup, SymplecticMembershipError
from orbit.settings import Tolerances


class SiegelDiscException(Exception):
    """
    Raised when the Siegel disc service receives invalid input.

    Parameters
    ----------
    message : str
        The error message describing the failure.
    """

    def __init__(self, message: str):
        super().__init__(message)


class DiscMembershipError(SiegelDiscException):
    """
    Raised when a matrix that must lie in the disc (or be a symmetric tangent vector) does not.
    """

    def __init__(self, message: str):
        super().__init__(message)


class DiscConsistencyError(SiegelDiscException):
    """
    Raised when an internal guarantee fails, e.g. h-bar Z + g-bar is numerically singular
    for a valid group element and disc point.
    """

    def __init__(self, message: str):
        super().__init__(message)


class SiegelDisc:
    """
    The restricted Siegel disc {Z : Z^T = Z, I - Z Z-bar > 0} with the Mobius action of Sp_res,
    its invariant Hermitian metric and Kahler form.

    Attributes
    ----------
    kernel : NumericsKernel
        The dense linear algebra primitives.
    polarized_space : PolarizedSpace
        The block calculus.
    symplectic_group : SymplecticGroup
        Group membership and the exponential map.
    tolerances : Tolerances
        The tolerance ladder.

    Methods
    -------
    siegel_contains(z, tol=None)
        Symmetry and positivity of a candidate point.
    mobius_act(a, point)
        The action (gZ + h)(h-bar Z + g-bar)^-1.
    mobius_tangent(a, point, tangent)
        The derivative of the action.
    transitive_element(point)
        A group element carrying 0 to the point.
    siegel_metric(point, u, v)
        The invariant Hermitian metric.
    siegel_kahler(point, u, v)
        The Kahler form, Im of the metric.
    """

    def __init__(
            self,
            kernel: NumericsKernel,
            polarized_space: PolarizedSpace,
            symplectic_group: SymplecticGroup,
            tolerances: Tolerances
    ):
        self.kernel = kernel
        self.polarized_space = polarized_space
        self.symplectic_group = symplectic_group
        self.tolerances = tolerances

    def siegel_contains(self, z: np.ndarray | SiegelPoint, tol: float | None = None) -> DiscMembership:
        """
        Checks Z = Z^T and I - Z Z-bar > 0, together with the dual condition I - Z*Z > 0.

        Parameters
        ----------
        z : np.ndarray | SiegelPoint
            The candidate point.
        tol : float, optional
            Symmetry tolerance; defaults to `membership`.

        Returns
        -------
        DiscMembership
            Membership with the smallest eigenvalues of I - Z Z-bar and I - Z*Z.
        """

        tol = self.tolerances.membership if tol is None else tol
        z = z.z if isinstance(z, SiegelPoint) else np.asarray(z, dtype=complex)

        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise DiscMembershipError(f"Disc points are square matrices, got shape {z.shape}")

        identity = np.eye(z.shape[0])
        symmetry_residual = self.kernel.hs_norm(z - z.T)

        # Hermitian parts: I - Z Z-bar is only Hermitian once Z is symmetric
        primal = identity - z @ z.conj()
        primal = (primal + primal.conj().T) / 2
        dual = identity - z.conj().T @ z
        dual = (dual + dual.conj().T) / 2

        min_eigenvalue = self.kernel.min_eigenvalue(primal)
        dual_min_eigenvalue = self.kernel.min_eigenvalue(dual)

        threshold = self.tolerances.positive_definite * max(1.0, self.kernel.op_norm(primal))

        return DiscMembership(
            is_member=symmetry_residual <= tol and min_eigenvalue > threshold and dual_min_eigenvalue > threshold,
            symmetry_residual=symmetry_residual,
            min_eigenvalue=min_eigenvalue,
            dual_min_eigenvalue=dual_min_eigenvalue
        )

    def point(self, z: np.ndarray) -> SiegelPoint:
        membership = self.siegel_contains(z)

        if not membership.is_member:
            error_message = f"Matrix is not in the Siegel disc: {membership.model_dump()}"
            logger.error(error_message)
            raise DiscMembershipError(error_message)

        z = np.asarray(z, dtype=complex)
        return SiegelPoint(n=z.shape[0], z=z)

    def tangent(self, v: np.ndarray) -> SiegelTangent:
        v = np.asarray(v, dtype=complex)

        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DiscMembershipError(f"Tangent vectors are square matrices, got shape {v.shape}")

        residual = self.kernel.hs_norm(v - v.T)

        if residual > self.tolerances.membership * max(1.0, self.kernel.hs_norm(v)):
            error_message = f"Tangent vector is not symmetric: ||V - V^T||_F = {residual:.3e}"
            logger.error(error_message)
            raise DiscMembershipError(error_message)

        return SiegelTangent(n=v.shape[0], v=v)

    def _require_group_element(self, a: SymplecticElement):
        try:
            self.symplectic_group.require_symplectic(a)
        except SymplecticMembershipError as e:
            raise DiscMembershipError(f"Only members of Sp_res act on the disc - {e}") from e

    def _require_point(self, point: SiegelPoint):
        membership = self.siegel_contains(point)

        if not membership.is_member:
            error_message = f"Point is outside the Siegel disc: {membership.model_dump()}"
            logger.error(error_message)
            raise DiscMembershipError(error_message)

    def random_symmetric(self, n: int, seed: Seed = None) -> np.ndarray:
        x = self.kernel.random_complex(self.symplectic_group.rng(seed), (n, n))
        return (x + x.T) / 2

    def random_point(self, n: int, seed: Seed = None, radius: float = 0.9) -> SiegelPoint:
        """
        Samples Z = radius * S / (||S|| + 1) with S random symmetric, so ||Z|| < radius.
        """

        s = self.random_symmetric(n, seed)
        return SiegelPoint(n=n, z=radius * s / (self.kernel.op_norm(s) + 1.0))

    def random_point_on_sphere(self, n: int, seed: Seed = None, norm: float = 0.99) -> SiegelPoint:
        """
        Samples a point with operator norm exactly `norm`, for near-boundary checks.
        """

        s = self.random_symmetric(n, seed)
        return SiegelPoint(n=n, z=norm * s / self.kernel.op_norm(s))

    def random_tangent(self, n: int, seed: Seed = None) -> SiegelTangent:
        return SiegelTangent(n=n, v=self.random_symmetric(n, seed))

    def _denominator(self, a: SymplecticElement, z: np.ndarray) -> np.ndarray:
        w = a.h.conj() @ z + a.g.conj()

        if not self.kernel.is_well_conditioned(w):
            condition = self.kernel.condition_number(w)
            error_message = f"h-bar Z + g-bar is numerically singular (condition number {condition:.3e})"
            logger.error(error_message)
            raise DiscConsistencyError(error_message)

        return w

    def mobius_act(self, a: SymplecticElement, point: SiegelPoint) -> SiegelPoint:
        """
        Applies rho_a(Z) = (gZ + h)(h-bar Z + g-bar)^-1.

        Raises
        ------
        DiscMembershipError
            If `a` is not in Sp_res or `point` is outside the disc.
        DiscConsistencyError
            If h-bar Z + g-bar is numerically singular or the image leaves the disc, neither of
            which can happen for valid inputs.
        """

        self._require_group_element(a)
        self._require_point(point)

        w = self._denominator(a, point.z)
        z = self.kernel.solve_right(a.g @ point.z + a.h, w)

        membership = self.siegel_contains(z)

        if not membership.is_member:
            error_message = f"Image of a disc point left the disc: {membership.model_dump()}"
            logger.error(error_message)
            raise DiscConsistencyError(error_message)

        return SiegelPoint(n=point.n, z=z)

    def mobius_tangent(self, a: SymplecticElement, point: SiegelPoint, tangent: SiegelTangent) -> SiegelTangent:
        """
        Pushes a tangent vector forward: g U W^-1 - (gZ + h) W^-1 h-bar U W^-1, W = h-bar Z + g-bar.
        """

        self._require_group_element(a)
        self._require_point(point)

        w_inverse = self.kernel.inverse(self._denominator(a, point.z))
        u = tangent.v
        image = a.g @ u @ w_inverse - (a.g @ point.z + a.h) @ w_inverse @ a.h.conj() @ u @ w_inverse

        return SiegelTangent(n=tangent.n, v=image)

    def transitive_generator(self, point: SiegelPoint) -> np.ndarray:
        """
        Computes B_Z = Z artanh|Z| / |Z| as Z f(Z*Z) with f(x) = artanh(sqrt(x))/sqrt(x).

        Raises
        ------
        SpectrumDomainError
            If ||Z|| > 1 - artanh_margin.
        DiscConsistencyError
            If the result is not symmetric within tolerance.
        """

        margin = self.tolerances.artanh_margin
        norm = self.kernel.op_norm(point.z)

        if norm > 1.0 - margin:
            error_message = f"||Z|| = {norm:.16f} is too close to the boundary for artanh"
            logger.error(error_message)
            raise SpectrumDomainError(error_message)

        z = point.z
        b = z @ self.kernel.herm_funcalc(z.conj().T @ z, artanh_sqrt_ratio, upper_bound=1.0 - margin)

        asymmetry = self.kernel.hs_norm(b - b.T)

        if asymmetry > self.tolerances.membership * max(1.0, self.kernel.hs_norm(b)):
            error_message = f"B_Z is not symmetric: ||B - B^T||_F = {asymmetry:.3e}"
            logger.error(error_message)
            raise DiscConsistencyError(error_message)

        return (b + b.T) / 2

    def transitive_generator_series(self, point: SiegelPoint, max_terms: int = 100_000) -> np.ndarray:
        """
        B_Z = Z sum_k (Z*Z)^k / (2k + 1), truncated when a term's norm drops below `series`.
        Slow near the boundary; used as an oracle for the eigen-based generator.
        """

        z = point.z
        gram = z.conj().T @ z
        power = np.eye(point.n, dtype=complex)
        total = np.zeros_like(power)

        for k in range(max_terms):
            term = power / (2 * k + 1)
            total += term

            if self.kernel.hs_norm(term) < self.tolerances.series:
                return z @ total

            power = power @ gram

        raise DiscConsistencyError(f"Series for B_Z did not converge in {max_terms} terms")

    def transitive_element(self, point: SiegelPoint) -> SymplecticElement:
        """
        Returns g_Z = exp([[0, B_Z], [B_Z-bar, 0]]), which satisfies rho_{g_Z}(0) = Z.
        """

        b = self.transitive_generator(point)
        generator = SpAlgebraElement(n=point.n, a1=np.zeros((point.n, point.n)), a2=b)

        return self.symplectic_group.exp_to_group(generator)

    def coset_to_disc(self, a: SymplecticElement) -> SiegelPoint:
        """
        The orbit map [a] -> h g-bar^-1, constant on cosets a U(H+).
        """

        self._require_group_element(a)
        return SiegelPoint(n=a.n, z=self.kernel.solve_right(a.h, a.g.conj()))

    def siegel_metric(self, point: SiegelPoint, u: SiegelTangent, v: SiegelTangent) -> complex:
        """
        The invariant Hermitian metric Tr(conj(G V) G U), G = (I - Z Z-bar)^-1.

        G is computed from Z alone, so no group representative of the point is needed.
        """

        self._require_point(point)

        g = self.kernel.inverse(np.eye(point.n) - point.z @ point.z.conj())
        return complex(np.trace((g @ v.v).conj() @ g @ u.v))

    def siegel_kahler(self, point: SiegelPoint, u: SiegelTangent, v: SiegelTangent) -> float:
        return self.siegel_metric(point, u, v).imag

    def origin_metric(self, u: SiegelTangent, v: SiegelTangent) -> complex:
        """
        Tr(V*U) at the origin, asserting it agrees with Tr(V-bar U) (they coincide when V^T = V).
        """

        adjoint_form = complex(np.trace(v.v.conj().T @ u.v))
        conjugate_form = complex(np.trace(v.v.conj() @ u.v))
        scale = max(1.0, self.kernel.hs_norm(u.v) * self.kernel.hs_norm(v.v))

        if abs(adjoint_form - conjugate_form) > self.tolerances.identity * scale:
            error_message = f"Tr(V*U) = {adjoint_form} and Tr(V-bar U) = {conjugate_form} disagree"
            logger.error(error_message)
            raise DiscConsistencyError(error_message)

        return adjoint_form

    @staticmethod
    def coset_metric(a: SpAlgebraElement, b: SpAlgebraElement) -> complex:
        return complex(np.trace(b.a2.conj() @ a.a2))

    @staticmethod
    def coset_kahler(a: SpAlgebraElement, b: SpAlgebraElement) -> float:
        value = 0.5j * np.trace(a.a2.conj() @ b.a2 - b.a2.conj() @ a.a2)
        return float(value.real)

    def sp2_distance(self, a: SymplecticElement) -> float:
        return self.kernel.hs_norm(a.to_array() - np.eye(2 * a.n))

    def zz_transpose_residual(self, point: SiegelPoint) -> float:
        identity = np.eye(point.n)
        primal = identity - point.z @ point.z.conj()
        dual = identity - point.z.conj().T @ point.z
        return self.kernel.hs_norm(primal.T - dual)
