import numpy as np
from loguru import logger

from orbit.data_structures.enums import CompositionOrder
from orbit.data_structures.models import (
    BlockOperator,
    ExtendedAlgebraElement,
    ExtendedGroupElement,
    ExtendedPredual,
    PredualElement,
    SiegelPoint,
    SpAlgebraElement,
    SymplecticElement,
    SymplectomorphismCheck
)
from orbit.services.numerics_kernel import NumericsKernel
from orbit.services.polarized_space import PolarizedSpace
from orbit.services.siegel_disc import SiegelDisc
from orbit.services.symplectic_group import Seed, SymplecticGroup, SymplecticMembershipError
from orbit.settings import Tolerances

# omega_hat = PROPORTIONALITY_FACTOR * gamma * omega_D(0); re-derived by derive_proportionality_constant
PROPORTIONALITY_FACTOR = -4.0


class CoadjointOrbitException(Exception):
    """
    Raised when the coadjoint orbit service receives invalid input.

    Parameters
    ----------
    message : str
        The error message describing the failure.
    """

    def __init__(self, message: str):
        super().__init__(message)


class SingularElementError(CoadjointOrbitException):
    """
    Raised when a group element is numerically singular, so a^-1 and sigma(a) are undefined.
    """

    def __init__(self, message: str):
        super().__init__(message)


class ZeroGammaError(CoadjointOrbitException):
    """
    Raised when an orbit operation is called with gamma = 0, where the orbit through (0, gamma)
    collapses to a point.
    """

    def __init__(self, message: str = "The orbit through (0, gamma) requires gamma != 0"):
        super().__init__(message)


class CoadjointConsistencyError(CoadjointOrbitException):
    """
    Raised when two evaluations of the same quantity disagree beyond tolerance.
    """

    def __init__(self, message: str):
        super().__init__(message)


GroupLike = ExtendedGroupElement | SymplecticElement | BlockOperator


class CoadjointOrbit:
    """
    The Schwinger central extension, its adjoint and coadjoint actions, and the coadjoint
    orbit through (0, gamma) together with its identification with the Siegel disc.

    Every action depends only on the operator part of an extended group element; the
    central phase is carried along but never read.

    Attributes
    ----------
    kernel : NumericsKernel
        The dense linear algebra primitives.
    polarized_space : PolarizedSpace
        The block calculus, d and the restricted trace.
    symplectic_group : SymplecticGroup
        Group membership, inverses and the exponential map.
    siegel_disc : SiegelDisc
        The disc, used for the Kahler form and the orbit/disc correspondence.
    tolerances : Tolerances
        The tolerance ladder.

    Methods
    -------
    schwinger(a, b)
        The Lie algebra 2-cocycle Tr(A[d, B]).
    sigma_cocycle(a)
        The group 1-cocycle a d a^-1 - d.
    coadjoint(group_element, m)
        The coadjoint action (a^-1 mu a - gamma sigma(a^-1), gamma).
    orbit_point(a, gamma)
        The orbit point (-gamma sigma(a), gamma) of the coset [a].
    symplecto_check(a, b, gamma)
        Compares the pulled-back orbit form with the disc Kahler form at the origin.
    """

    def __init__(
            self,
            kernel: NumericsKernel,
            polarized_space: PolarizedSpace,
            symplectic_group: SymplecticGroup,
            siegel_disc: SiegelDisc,
            tolerances: Tolerances
    ):
        self.kernel = kernel
        self.polarized_space = polarized_space
        self.symplectic_group = symplectic_group
        self.siegel_disc = siegel_disc
        self.tolerances = tolerances

    @staticmethod
    def _as_block(a: GroupLike) -> BlockOperator:
        if isinstance(a, ExtendedGroupElement):
            return a.a
        if isinstance(a, SymplecticElement):
            return a.to_block()
        return a

    @staticmethod
    def lift(a: SymplecticElement | BlockOperator, phase: complex = 1 + 0j) -> ExtendedGroupElement:
        block = a.to_block() if isinstance(a, SymplecticElement) else a
        return ExtendedGroupElement(a=block, phase=phase)

    def _invert(self, a: BlockOperator) -> BlockOperator:
        array = a.to_array()

        if not self.kernel.is_well_conditioned(array):
            condition = self.kernel.condition_number(array)
            error_message = f"Group element is numerically singular (condition number {condition:.3e})"
            logger.error(error_message)
            raise SingularElementError(error_message)

        return BlockOperator.from_array(self.kernel.inverse(array))

    def _require_gamma(self, gamma: complex):
        if gamma == 0:
            logger.error("Orbit operation called with gamma = 0")
            raise ZeroGammaError()

    def schwinger(self, a: BlockOperator, b: BlockOperator) -> complex:
        """
        Evaluates s(A, B) = Tr(A[d, B]).

        The value is computed both from the full product and from the off-diagonal blocks,
        2i Tr(A-+ B+- - A+- B-+), and the two must agree.

        Parameters
        ----------
        a : BlockOperator
            The first argument.
        b : BlockOperator
            The second argument.

        Returns
        -------
        complex
            The Schwinger term.

        Raises
        ------
        PolarizedSpaceException
            If the arguments have different polarizations.
        CoadjointConsistencyError
            If the two evaluation paths disagree.
        """

        full = complex(np.trace(self.polarized_space.multiply(a, self.polarized_space.commutator_with_d(b)).to_array()))
        blocks = complex(2j * np.trace(a.mp @ b.pm - a.pm @ b.mp))

        scale = max(1.0, self.kernel.hs_norm(a.to_array()) * self.kernel.hs_norm(b.to_array()))

        if abs(full - blocks) > self.tolerances.identity * scale:
            error_message = f"Schwinger term evaluations disagree: {full} vs {blocks}"
            logger.error(error_message)
            raise CoadjointConsistencyError(error_message)

        return blocks

    def extended_bracket(self, x: ExtendedAlgebraElement, y: ExtendedAlgebraElement) -> ExtendedAlgebraElement:
        return ExtendedAlgebraElement(
            op=self.polarized_space.commutator(x.op, y.op),
            lam=self.schwinger(x.op, y.op)
        )

    def sigma_cocycle(self, a: GroupLike) -> PredualElement:
        """
        Evaluates sigma(a) = a d a^-1 - d.

        Raises
        ------
        SingularElementError
            If `a` is numerically singular.
        """

        a = self._as_block(a)
        d = self.polarized_space.d_operator(a.n).to_array()
        a_inverse = self._invert(a).to_array()

        return PredualElement.from_array(a.to_array() @ d @ a_inverse - d)

    def extended_adjoint(self, group_element: GroupLike, x: ExtendedAlgebraElement) -> ExtendedAlgebraElement:
        """
        Ad_G(B, nu) = (a B a^-1, nu - Tr(sigma(a^-1) B)).
        """

        a = self._as_block(group_element)
        a_inverse = self._invert(a)

        op = self.polarized_space.multiply(self.polarized_space.multiply(a, x.op), a_inverse)
        correction = self.polarized_space.restricted_trace(
            self.polarized_space.multiply(self.sigma_cocycle(a_inverse), x.op)
        )

        return ExtendedAlgebraElement(op=op, lam=x.lam - correction)

    def coadjoint(self, group_element: GroupLike, m: ExtendedPredual) -> ExtendedPredual:
        """
        Ad*_G(mu, gamma) = (a^-1 mu a - gamma sigma(a^-1), gamma).

        Ad*_{G1 G2} = Ad*_{G2} o Ad*_{G1}, so this is a right action.

        Parameters
        ----------
        group_element : ExtendedGroupElement | SymplecticElement | BlockOperator
            The acting element; only its operator part is used.
        m : ExtendedPredual
            The predual element to transform.

        Returns
        -------
        ExtendedPredual
            The transformed element; gamma is unchanged.

        Raises
        ------
        SingularElementError
            If the operator part is numerically singular.
        """

        a = self._as_block(group_element)
        a_inverse = self._invert(a)

        conjugated = a_inverse.to_array() @ m.mu.to_array() @ a.to_array()
        shift = complex(m.gamma) * self.sigma_cocycle(a_inverse).to_array()

        return ExtendedPredual(mu=PredualElement.from_array(conjugated - shift), gamma=m.gamma)

    def ad_star(self, x: ExtendedAlgebraElement, m: ExtendedPredual) -> ExtendedPredual:
        """
        ad*_(A, lambda)(mu, gamma) = ([mu, A] - gamma [d, A], 0); lambda plays no role.
        """

        commutator = self.polarized_space.commutator(m.mu, x.op).to_array()
        shift = complex(m.gamma) * self.polarized_space.commutator_with_d(x.op).to_array()

        return ExtendedPredual(mu=PredualElement.from_array(commutator - shift), gamma=0j)

    def affine_action(self, a: GroupLike, mu: PredualElement, gamma: complex) -> PredualElement:
        """
        a . mu = a mu a^-1 - gamma sigma(a), a left action by the sigma cocycle law.
        """

        a = self._as_block(a)
        a_inverse = self._invert(a)
        conjugated = a.to_array() @ mu.to_array() @ a_inverse.to_array()

        return PredualElement.from_array(conjugated - complex(gamma) * self.sigma_cocycle(a).to_array())

    def orbit_point(self, a: SymplecticElement, gamma: float) -> ExtendedPredual:
        """
        Maps the coset [a] to (-gamma sigma(a), gamma) on the orbit through (0, gamma).

        The value depends on the coset a U(H+) only: right multiplication of `a` by a
        block-diagonal unitary leaves it unchanged.

        Raises
        ------
        ZeroGammaError
            If gamma = 0.
        SymplecticMembershipError
            If `a` is not in Sp_res.
        """

        self._require_gamma(gamma)

        membership = self.symplectic_group.is_symplectic(a)

        if not membership.is_member:
            error_message = f"Orbit points are defined for Sp_res members only: residuals {membership.residuals}"
            logger.error(error_message)
            raise SymplecticMembershipError(error_message)

        mu = -gamma * self.sigma_cocycle(a).to_array()
        return ExtendedPredual(mu=PredualElement.from_array(mu), gamma=gamma)

    def base_point(self, n: int, gamma: float) -> ExtendedPredual:
        return ExtendedPredual(mu=self.polarized_space.as_predual(self.polarized_space.zero(n)), gamma=gamma)

    def displacement(self, group_element: GroupLike, gamma: float) -> float:
        """
        How far the element moves (0, gamma): the Frobenius norm of the mu part of its image.
        """

        a = self._as_block(group_element)
        image = self.coadjoint(group_element, self.base_point(a.n, gamma))
        return self.kernel.hs_norm(image.mu.to_array())

    def kks_value(self, a: SpAlgebraElement, b: SpAlgebraElement, gamma: float) -> complex:
        self._require_gamma(gamma)
        return -gamma * self.schwinger(a.to_block(), b.to_block())

    def kks_form(self, a: SpAlgebraElement, b: SpAlgebraElement, gamma: float) -> float:
        """
        The KKS form at (0, gamma) on the tangent vectors generated by A and B: -gamma s(A, B).

        Raises
        ------
        ZeroGammaError
            If gamma = 0.
        SymplecticMembershipError
            If either argument is not in sp_res.
        CoadjointConsistencyError
            If the value has a non-negligible imaginary part, which cannot happen for sp inputs.
        """

        for element in (a, b):
            membership = self.symplectic_group.is_sp_algebra(element)

            if not membership.is_member:
                error_message = f"KKS form arguments must lie in sp_res: residuals {membership.residuals}"
                logger.error(error_message)
                raise SymplecticMembershipError(error_message)

        return self._real_part("KKS form", self.kks_value(a, b, gamma), a, b, gamma)

    def pullback_form(self, a: SpAlgebraElement, b: SpAlgebraElement, gamma: float) -> float:
        """
        -2i gamma Tr(A2-bar B2 - B2-bar A2), real for real gamma.

        Raises
        ------
        CoadjointConsistencyError
            If the value has a non-negligible imaginary part.
        """

        value = -2j * gamma * np.trace(a.a2.conj() @ b.a2 - b.a2.conj() @ a.a2)
        return self._real_part("Pulled-back form", complex(value), a, b, gamma)

    def _real_part(self, name: str, value: complex, a: SpAlgebraElement, b: SpAlgebraElement, gamma: float) -> float:
        scale = max(1.0, abs(gamma) * self.kernel.hs_norm(a.to_array()) * self.kernel.hs_norm(b.to_array()))

        if abs(value.imag) > self.tolerances.reality * scale:
            error_message = f"{name} has imaginary part {value.imag:.3e}"
            logger.error(error_message)
            raise CoadjointConsistencyError(error_message)

        return value.real

    def origin_kahler(self, a: SpAlgebraElement, b: SpAlgebraElement) -> float:
        # the tangent space of the disc at 0 is identified with the A2 blocks
        origin = SiegelPoint(n=a.n, z=np.zeros((a.n, a.n)))
        return self.siegel_disc.siegel_kahler(origin, self.siegel_disc.tangent(a.a2), self.siegel_disc.tangent(b.a2))

    def symplecto_check(self, a: SpAlgebraElement, b: SpAlgebraElement, gamma: float) -> SymplectomorphismCheck:
        """
        Compares the pulled-back orbit form with the Kahler form of the disc at the origin.

        Parameters
        ----------
        a : SpAlgebraElement
            The first tangent direction.
        b : SpAlgebraElement
            The second tangent direction.
        gamma : float
            The central coordinate of the orbit.

        Returns
        -------
        SymplectomorphismCheck
            Both forms, the KKS value, the constant -4 gamma, their ratio and the residual
            |omega_hat - constant * omega_D|. A pair with |omega_D| below `degenerate` is
            reported as inconclusive with no ratio.
        """

        omega_d = self.origin_kahler(a, b)
        omega_hat = self.pullback_form(a, b, gamma)
        kks = self.kks_form(a, b, gamma)
        constant = PROPORTIONALITY_FACTOR * gamma

        inconclusive = abs(omega_d) <= self.tolerances.degenerate
        residual = abs(omega_hat - constant * omega_d)

        return SymplectomorphismCheck(
            omega_d=omega_d,
            omega_hat=omega_hat,
            kks=kks,
            constant=constant,
            ratio=None if inconclusive else omega_hat / omega_d,
            residual=residual,
            inconclusive=inconclusive,
            passed=residual <= self.tolerances.symplecto * max(1.0, abs(omega_hat))
        )

    def derive_proportionality_constant(self, gamma: float) -> float:
        """
        Evaluates omega_hat / omega_D(0) on the 1x1 pair A2 = 1, B2 = i, whose Kahler value is -1.
        """

        zero = np.zeros((1, 1))
        a = SpAlgebraElement(n=1, a1=zero, a2=np.ones((1, 1)))
        b = SpAlgebraElement(n=1, a1=zero, a2=1j * np.ones((1, 1)))

        return self.pullback_form(a, b, gamma) / self.origin_kahler(a, b)

    def compose_group(self, first: ExtendedGroupElement, second: ExtendedGroupElement) -> ExtendedGroupElement:
        return ExtendedGroupElement(
            a=self.polarized_space.multiply(first.a, second.a),
            phase=complex(first.phase) * complex(second.phase)
        )

    def predual_distance(self, first: ExtendedPredual, second: ExtendedPredual) -> float:
        difference = self.kernel.hs_norm(first.mu.to_array() - second.mu.to_array())
        return difference + abs(complex(first.gamma) - complex(second.gamma))

    def random_predual(self, n: int, gamma: complex, scale: float = 1.0, seed: Seed = None) -> ExtendedPredual:
        rng = self.symplectic_group.rng(seed)
        mu = self.kernel.random_complex(rng, (2 * n, 2 * n), scale)
        return ExtendedPredual(mu=PredualElement.from_array(mu), gamma=gamma)

    def composition_residual(
            self,
            first: ExtendedGroupElement,
            second: ExtendedGroupElement,
            m: ExtendedPredual,
            order: CompositionOrder
    ) -> float:
        combined = self.coadjoint(self.compose_group(first, second), m)

        if order == CompositionOrder.RIGHT:
            sequential = self.coadjoint(second, self.coadjoint(first, m))
        else:
            sequential = self.coadjoint(first, self.coadjoint(second, m))

        return self.predual_distance(combined, sequential)

    def determine_composition_order(self, seed: int = 0, scale: float = 0.5) -> CompositionOrder:
        """
        Decides numerically at n = 1 whether Ad*_{G1 G2} equals Ad*_{G2} o Ad*_{G1} (RIGHT)
        or Ad*_{G1} o Ad*_{G2} (LEFT).

        Raises
        ------
        CoadjointConsistencyError
            If neither order holds within the `inverse_chain` tolerance.
        """

        rng = self.symplectic_group.rng(seed)
        first = self.lift(self.symplectic_group.random_symplectic(1, scale, rng))
        second = self.lift(self.symplectic_group.random_symplectic(1, scale, rng))
        m = self.random_predual(1, gamma=1.0, seed=rng)

        residuals = {order: self.composition_residual(first, second, m, order) for order in CompositionOrder}
        order = min(residuals, key=residuals.get)

        if residuals[order] > self.tolerances.inverse_chain:
            error_message = f"Coadjoint action is neither a left nor a right action: residuals {residuals}"
            logger.error(error_message)
            raise CoadjointConsistencyError(error_message)

        logger.info(f"Coadjoint composition order determined at n = 1: {order.value} (residuals {residuals})")
        return order

    def orbit_to_disc(self, m: ExtendedPredual) -> SiegelPoint:
        """
        Inverts the orbit map: recovers h g-bar^-1 from mu = -gamma sigma(a).

        d - mu / gamma = a d a^-1, so (I + i(d - mu / gamma)) / 2 projects onto a(H-), whose
        columns over H- are [[h g^T], [g-bar g^T]]; the disc point is their block quotient.

        Raises
        ------
        ZeroGammaError
            If gamma = 0.
        DiscMembershipError
            If `m` is not on the orbit through (0, gamma).
        """

        gamma = complex(m.gamma)
        self._require_gamma(gamma)

        n = m.mu.n
        d = self.polarized_space.d_operator(n).to_array()
        conjugated_d = d - m.mu.to_array() / gamma

        projection = (np.eye(2 * n) + 1j * conjugated_d) / 2
        columns = projection[:, n:]

        return self.siegel_disc.point(self.kernel.solve_right(columns[:n], columns[n:]))

    def disc_to_orbit(self, point: SiegelPoint, gamma: float) -> ExtendedPredual:
        return self.orbit_point(self.siegel_disc.transitive_element(point), gamma)
