from typing import Callable

import numpy as np
import scipy.linalg
from loguru import logger

from orbit.settings import Tolerances


class NumericsKernelException(Exception):
    """
    Raised when a dense linear algebra primitive cannot produce a valid result.

    Parameters
    ----------
    message : str, optional
        The error message describing the failure. Default is "Numerical kernel failure".
    """

    def __init__(self, message: str = "Numerical kernel failure"):
        super().__init__(message)


class DimensionError(NumericsKernelException):
    """
    Raised when an operand has the wrong shape, e.g. a non-square input to the exponential.
    """

    def __init__(self, message: str = "Dimension mismatch"):
        super().__init__(message)


class NumericRangeError(NumericsKernelException):
    """
    Raised when an input or output holds NaN or infinite entries.
    """

    def __init__(self, message: str = "Non-finite entries"):
        super().__init__(message)


class NotHermitianError(NumericsKernelException):
    def __init__(self, message: str = "Matrix is not Hermitian within tolerance"):
        super().__init__(message)


class SpectrumDomainError(NumericsKernelException):
    """
    Raised when an eigenvalue falls outside the domain of a spectral function.
    """

    def __init__(self, message: str = "Eigenvalue outside the domain of the spectral function"):
        super().__init__(message)


SpectralFunction = Callable[[np.ndarray], np.ndarray]


def artanh_sqrt_ratio(x: np.ndarray) -> np.ndarray:
    """
    Evaluates artanh(sqrt(x)) / sqrt(x) on [0, 1), continued by its limit 1 at x = 0.

    Parameters
    ----------
    x : np.ndarray
        Non-negative values strictly below 1.

    Returns
    -------
    np.ndarray
        The elementwise values.
    """

    x = np.asarray(x, dtype=float)
    result = np.empty_like(x)
    small = x < 1e-8

    # 1 + x/3 + x^2/5 is exact to double precision below the cut-off
    result[small] = 1.0 + x[small] / 3.0 + x[small] ** 2 / 5.0
    root = np.sqrt(x[~small])
    result[~small] = np.arctanh(root) / root

    return result


class NumericsKernel:
    """
    Dense complex linear algebra primitives shared by every other service.

    All methods are pure: inputs are never modified and no state is kept between calls,
    so a single kernel can be shared across worker threads.

    Attributes
    ----------
    tolerances : Tolerances
        The tolerance ladder; the kernel reads `exp`, `hermitian`, `positive_definite`
        and `condition`.

    Methods
    -------
    mat_exp(a)
        The matrix exponential.
    is_positive_definite(a, tol=None)
        Strict positivity of a Hermitian matrix.
    herm_funcalc(a, f, upper_bound=None)
        Applies a scalar function to a Hermitian positive semidefinite matrix.
    hs_norm(a)
        The Hilbert-Schmidt (Frobenius) norm.
    op_norm(a)
        The operator norm (largest singular value).
    """

    def __init__(self, tolerances: Tolerances):
        self.tolerances = tolerances

    @staticmethod
    def _as_matrix(a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=complex)

        if a.ndim != 2:
            error_message = f"Expected a matrix, got an array with {a.ndim} dimension(s)"
            logger.error(error_message)
            raise DimensionError(error_message)

        if not np.all(np.isfinite(a)):
            error_message = "Matrix has non-finite entries"
            logger.error(error_message)
            raise NumericRangeError(error_message)

        return a

    def _as_square(self, a: np.ndarray) -> np.ndarray:
        a = self._as_matrix(a)

        if a.shape[0] != a.shape[1]:
            error_message = f"Expected a square matrix, got shape {a.shape}"
            logger.error(error_message)
            raise DimensionError(error_message)

        return a

    def mat_exp(self, a: np.ndarray) -> np.ndarray:
        """
        Computes exp(a) by scaling and squaring with a diagonal Pade approximant.

        Parameters
        ----------
        a : np.ndarray
            A square matrix with finite entries.

        Returns
        -------
        np.ndarray
            exp(a).

        Raises
        ------
        DimensionError
            If `a` is not square.
        NumericRangeError
            If `a` has non-finite entries or the exponential overflows.
        """

        a = self._as_square(a)

        with np.errstate(over="ignore", invalid="ignore"):
            result = scipy.linalg.expm(a)

        if not np.all(np.isfinite(result)):
            error_message = f"Matrix exponential overflowed (operator norm of input {self.op_norm(a):.3e})"
            logger.error(error_message)
            raise NumericRangeError(error_message)

        return result

    def hermitian_residual(self, a: np.ndarray) -> float:
        a = self._as_square(a)
        return float(np.linalg.norm(a - a.conj().T, "fro"))

    def _check_hermitian(self, a: np.ndarray) -> np.ndarray:
        a = self._as_square(a)
        residual = self.hermitian_residual(a)
        scale = float(np.linalg.norm(a, "fro"))

        if residual > self.tolerances.hermitian * max(scale, 1.0):
            error_message = f"Matrix is not Hermitian: ||A - A*||_F = {residual:.3e}, ||A||_F = {scale:.3e}"
            logger.error(error_message)
            raise NotHermitianError(error_message)

        return (a + a.conj().T) / 2

    def min_eigenvalue(self, a: np.ndarray) -> float:
        hermitian_part = self._check_hermitian(a)
        return float(scipy.linalg.eigvalsh(hermitian_part)[0])

    def is_positive_definite(self, a: np.ndarray, tol: float | None = None) -> bool:
        """
        Decides strict positivity of a Hermitian matrix.

        Parameters
        ----------
        a : np.ndarray
            A matrix that is Hermitian within the kernel's `hermitian` tolerance.
        tol : float, optional
            Eigenvalue threshold. Defaults to `positive_definite` times the operator norm.

        Returns
        -------
        bool
            True iff the smallest eigenvalue of the Hermitian part exceeds the threshold.

        Raises
        ------
        NotHermitianError
            If `a` is not Hermitian within tolerance.
        """

        smallest = self.min_eigenvalue(a)

        if tol is None:
            tol = self.tolerances.positive_definite * self.op_norm(a)

        return smallest > tol

    def herm_funcalc(self, a: np.ndarray, f: SpectralFunction, upper_bound: float | None = None) -> np.ndarray:
        """
        Applies `f` to a Hermitian positive semidefinite matrix through its eigendecomposition.

        Parameters
        ----------
        a : np.ndarray
            A Hermitian positive semidefinite matrix.
        f : SpectralFunction
            A vectorized scalar function, evaluated on the array of eigenvalues.
        upper_bound : float, optional
            Largest eigenvalue accepted; used for functions with a singularity, e.g.
            artanh(sqrt(x))/sqrt(x) at x = 1. Eigenvalues above it raise, they are never clamped.

        Returns
        -------
        np.ndarray
            U f(L) U* for the unitary eigendecomposition a = U L U*.

        Raises
        ------
        NotHermitianError
            If `a` is not Hermitian within tolerance.
        SpectrumDomainError
            If `a` has a significantly negative eigenvalue, an eigenvalue above `upper_bound`,
            or `f` returns non-finite values.
        """

        hermitian_part = self._check_hermitian(a)
        eigenvalues, eigenvectors = scipy.linalg.eigh(hermitian_part)

        noise_floor = self.tolerances.positive_definite * max(1.0, float(np.abs(eigenvalues).max(initial=0.0)))

        if eigenvalues.size and eigenvalues[0] < -noise_floor:
            error_message = f"Matrix is not positive semidefinite: smallest eigenvalue {eigenvalues[0]:.3e}"
            logger.error(error_message)
            raise SpectrumDomainError(error_message)

        if upper_bound is not None and eigenvalues.size and eigenvalues[-1] > upper_bound:
            error_message = f"Largest eigenvalue {eigenvalues[-1]:.16f} exceeds the admissible bound {upper_bound}"
            logger.error(error_message)
            raise SpectrumDomainError(error_message)

        eigenvalues = np.clip(eigenvalues, 0.0, None)

        with np.errstate(all="ignore"):
            values = np.asarray(f(eigenvalues))

        if values.shape != eigenvalues.shape or not np.all(np.isfinite(values)):
            error_message = "Spectral function is undefined on part of the spectrum"
            logger.error(error_message)
            raise SpectrumDomainError(error_message)

        return (eigenvectors * values) @ eigenvectors.conj().T

    def hs_norm(self, a: np.ndarray) -> float:
        a = self._as_matrix(a)
        return float(np.linalg.norm(a, "fro"))

    def op_norm(self, a: np.ndarray) -> float:
        a = self._as_matrix(a)

        if a.size == 0:
            return 0.0

        return float(np.linalg.norm(a, 2))

    def condition_number(self, a: np.ndarray) -> float:
        a = self._as_square(a)
        singular_values = scipy.linalg.svdvals(a)

        if singular_values[-1] == 0:
            return float("inf")

        return float(singular_values[0] / singular_values[-1])

    def is_well_conditioned(self, a: np.ndarray) -> bool:
        return self.condition_number(a) <= self.tolerances.condition

    def inverse(self, a: np.ndarray) -> np.ndarray:
        """
        Inverts a square matrix whose condition number is within the `condition` bound.

        Raises
        ------
        NumericRangeError
            If the matrix is numerically singular.
        """

        a = self._as_square(a)

        if not self.is_well_conditioned(a):
            condition = self.condition_number(a)
            error_message = f"Matrix is numerically singular (condition number {condition:.3e})"
            logger.error(error_message)
            raise NumericRangeError(error_message)

        return scipy.linalg.inv(a)

    def solve_right(self, numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
        """
        Returns numerator @ inv(denominator) without forming the inverse.

        Raises
        ------
        NumericRangeError
            If `denominator` is numerically singular.
        """

        denominator = self._as_square(denominator)

        if not self.is_well_conditioned(denominator):
            condition = self.condition_number(denominator)
            error_message = f"Denominator is numerically singular (condition number {condition:.3e})"
            logger.error(error_message)
            raise NumericRangeError(error_message)

        return scipy.linalg.solve(denominator.T, np.asarray(numerator, dtype=complex).T).T

    @staticmethod
    def random_complex(rng: np.random.Generator, shape: tuple[int, ...], scale: float = 1.0) -> np.ndarray:
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    def random_unitary(self, rng: np.random.Generator, n: int) -> np.ndarray:
        q, r = scipy.linalg.qr(self.random_complex(rng, (n, n)))
        phases = np.diag(r) / np.abs(np.diag(r))
        return q * phases
