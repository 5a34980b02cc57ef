import numpy as np
import scipy.linalg
from loguru import logger

from orbit.data_structures.models import MembershipResult, SpAlgebraElement, SymplecticElement, BlockOperator
from orbit.services.numerics_kernel import NumericsKernel
from orbit.services.polarized_space import PolarizedSpace
from orbit.settings import Tolerances


class SymplecticGroupException(Exception):
    """
    Raised when the symplectic group service receives invalid input.

    Parameters
    ----------
    message : str
        The error message describing the failure.
    """

    def __init__(self, message: str):
        super().__init__(message)


class SymplecticMembershipError(SymplecticGroupException):
    """
    Raised when an operation that requires a member of Sp_res or sp_res receives something
    whose membership residuals exceed tolerance.
    """

    def __init__(self, message: str):
        super().__init__(message)


Seed = int | np.random.Generator | None


class SymplecticGroup:
    """
    The restricted symplectic group Sp_res and its Lie algebra sp_res at truncation n.

    Group elements are (g, h) pairs; the full operator is [[g, h], [h-bar, g-bar]].
    Random group elements are only ever produced by exponentiating random algebra
    elements, which keeps them in the identity component.

    Attributes
    ----------
    kernel : NumericsKernel
        The dense linear algebra primitives.
    polarized_space : PolarizedSpace
        The block calculus (conjugation, d = J).
    tolerances : Tolerances
        The tolerance ladder; membership predicates default to `membership`.
    """

    def __init__(self, kernel: NumericsKernel, polarized_space: PolarizedSpace, tolerances: Tolerances):
        self.kernel = kernel
        self.polarized_space = polarized_space
        self.tolerances = tolerances

    @staticmethod
    def rng(seed: Seed) -> np.random.Generator:
        if isinstance(seed, np.random.Generator):
            return seed
        return np.random.default_rng(seed)

    def omega_eval(self, u: np.ndarray, v: np.ndarray) -> complex:
        """
        Evaluates Omega(u, v) = <u, conj(J v)> with the Hermitian product linear in the first slot.

        Parameters
        ----------
        u : np.ndarray
            A vector of length 2n.
        v : np.ndarray
            A vector of length 2n.

        Returns
        -------
        complex
            Omega(u, v).

        Raises
        ------
        SymplecticGroupException
            If the vectors do not have the same even length.
        """

        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)

        if u.ndim != 1 or u.shape != v.shape or u.shape[0] % 2 != 0 or u.shape[0] == 0:
            error_message = f"Omega expects two vectors of equal even length, got {u.shape} and {v.shape}"
            logger.error(error_message)
            raise SymplecticGroupException(error_message)

        j = self.polarized_space.d_operator(u.shape[0] // 2).to_array()
        w = self.polarized_space.conj_vector(j @ v)

        # <u, w> = sum_k u_k conj(w_k)
        return complex(np.vdot(w, u))

    def is_symplectic(self, candidate: SymplecticElement, tol: float | None = None) -> MembershipResult:
        """
        Checks g*g - h^T h-bar = I and g*h = h^T g-bar.

        The full-operator identity a*Ja = J is reported as a diagnostic residual only.

        Parameters
        ----------
        candidate : SymplecticElement
            The (g, h) pair to test.
        tol : float, optional
            Absolute Frobenius tolerance; defaults to the `membership` tolerance.

        Returns
        -------
        MembershipResult
            Membership and the named residuals.
        """

        tol = self.tolerances.membership if tol is None else tol
        g, h = candidate.g, candidate.h
        identity = np.eye(candidate.n)

        unitarity = self.kernel.hs_norm(g.conj().T @ g - h.T @ h.conj() - identity)
        symmetry = self.kernel.hs_norm(g.conj().T @ h - h.T @ g.conj())

        a = candidate.to_array()
        j = self.polarized_space.d_operator(candidate.n).to_array()
        form = self.kernel.hs_norm(a.conj().T @ j @ a - j)

        return MembershipResult(
            is_member=unitarity <= tol and symmetry <= tol,
            residuals={"unitarity": unitarity, "symmetry": symmetry, "form": form}
        )

    def require_symplectic(self, a: SymplecticElement):
        membership = self.is_symplectic(a)

        if not membership.is_member:
            error_message = f"Element is not in Sp_res: residuals {membership.residuals}"
            logger.error(error_message)
            raise SymplecticMembershipError(error_message)

    def symplectic_inverse(self, a: SymplecticElement) -> SymplecticElement:
        """
        Returns the inverse [[g*, -h^T], [-h*, g^T]] without any matrix inversion.

        Raises
        ------
        SymplecticMembershipError
            If `a` is not a member within tolerance.
        """

        self.require_symplectic(a)
        return SymplecticElement(n=a.n, g=a.g.conj().T, h=-a.h.T)

    def is_sp_algebra(self, candidate: SpAlgebraElement, tol: float | None = None) -> MembershipResult:
        tol = self.tolerances.membership if tol is None else tol

        skew = self.kernel.hs_norm(candidate.a1 + candidate.a1.conj().T)
        symmetric = self.kernel.hs_norm(candidate.a2 - candidate.a2.T)

        a = candidate.to_array()
        j = self.polarized_space.d_operator(candidate.n).to_array()
        form = self.kernel.hs_norm(a.conj().T @ j + j @ a)

        return MembershipResult(
            is_member=skew <= tol and symmetric <= tol and form <= tol,
            residuals={"skew": skew, "symmetric": symmetric, "form": form}
        )

    def random_sp_algebra(self, n: int, scale: float, seed: Seed = None) -> SpAlgebraElement:
        """
        Samples A1 = (G - G*)/2 and A2 = (H + H^T)/2 from i.i.d. complex Gaussian G, H.

        Parameters
        ----------
        n : int
            The truncation dimension.
        scale : float
            Standard deviation of the real and imaginary parts of each entry.
        seed : int | np.random.Generator, optional
            Seed or generator; a fixed seed gives identical output.

        Returns
        -------
        SpAlgebraElement
            An element of sp_res.
        """

        if scale < 0:
            raise SymplecticGroupException(f"Sampling scale must be non-negative, got {scale}")

        rng = self.rng(seed)
        g = self.kernel.random_complex(rng, (n, n), scale)
        h = self.kernel.random_complex(rng, (n, n), scale)

        return SpAlgebraElement(n=n, a1=(g - g.conj().T) / 2, a2=(h + h.T) / 2)

    def exp_to_group(self, a: SpAlgebraElement) -> SymplecticElement:
        """
        Exponentiates an algebra element and repackages the result as (g, h).

        Raises
        ------
        SymplecticMembershipError
            If `a` is not in sp_res within tolerance.
        """

        membership = self.is_sp_algebra(a)

        if not membership.is_member:
            error_message = f"Element is not in sp_res: residuals {membership.residuals}"
            logger.error(error_message)
            raise SymplecticMembershipError(error_message)

        return SymplecticElement.from_array(self.kernel.mat_exp(a.to_array()))

    def compose(self, a: SymplecticElement, b: SymplecticElement) -> SymplecticElement:
        if a.n != b.n:
            raise SymplecticGroupException(f"Cannot compose elements with n = {a.n} and n = {b.n}")

        return SymplecticElement.from_array(a.to_array() @ b.to_array())

    def random_symplectic(self, n: int, scale: float, seed: Seed = None) -> SymplecticElement:
        return self.exp_to_group(self.random_sp_algebra(n=n, scale=scale, seed=seed))

    def random_unitary_isotropy(self, n: int, seed: Seed = None) -> SymplecticElement:
        """
        Samples (u, 0) with u unitary: an element of the isotropy group U(H+) of the origin.
        """

        u = self.kernel.random_unitary(self.rng(seed), n)
        return SymplecticElement(n=n, g=u, h=np.zeros((n, n)))

    def derived_identity_residuals(self, a: SymplecticElement) -> dict[str, float]:
        identity = np.eye(a.n)

        return {
            "row_unitarity": self.kernel.hs_norm(a.g @ a.g.conj().T - a.h @ a.h.conj().T - identity),
            "row_symmetry": self.kernel.hs_norm(a.g @ a.h.T - a.h @ a.g.T)
        }

    @staticmethod
    def index_zero_margin(a: SymplecticElement) -> float:
        """
        Returns sigma_min(g) - 1.

        g*g = I + h^T h-bar forces every singular value of g to be at least 1, so g is
        injective with index zero; a negative margin means the pair is not a member.
        """

        return float(scipy.linalg.svdvals(a.g)[-1] - 1.0)

    def real_form_residual(self, a: BlockOperator) -> float:
        return self.kernel.hs_norm(self.polarized_space.conj_op(a).to_array() - a.to_array())
