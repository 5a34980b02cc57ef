from typing import Iterator

import numpy as np
from loguru import logger

from orbit.data_structures.models import BlockOperator, PredualElement, Polarization
from orbit.services.numerics_kernel import NumericsKernel


class PolarizedSpaceException(Exception):
    """
    Raised when block operators from different polarizations are combined.

    Parameters
    ----------
    message : str
        The error message describing the failure.
    """

    def __init__(self, message: str):
        super().__init__(message)


class PolarizedSpace:
    """
    Block calculus on H = H+ (+) H- at a finite truncation.

    Attributes
    ----------
    kernel : NumericsKernel
        The dense linear algebra primitives.
    """

    def __init__(self, kernel: NumericsKernel):
        self.kernel = kernel

    @staticmethod
    def _check_same_polarization(*operators: BlockOperator) -> int:
        sizes = {operator.n for operator in operators}

        if len(sizes) != 1:
            error_message = f"Operands live on different polarizations: n = {sorted(sizes)}"
            logger.error(error_message)
            raise PolarizedSpaceException(error_message)

        return sizes.pop()

    @staticmethod
    def identity(n: int) -> BlockOperator:
        return BlockOperator.from_array(np.eye(2 * n))

    @staticmethod
    def zero(n: int) -> BlockOperator:
        return BlockOperator.from_array(np.zeros((2 * n, 2 * n)))

    @staticmethod
    def as_predual(operator: BlockOperator) -> PredualElement:
        return PredualElement(n=operator.n, pp=operator.pp, pm=operator.pm, mp=operator.mp, mm=operator.mm)

    def multiply(self, a: BlockOperator, b: BlockOperator) -> BlockOperator:
        self._check_same_polarization(a, b)
        return BlockOperator.from_array(a.to_array() @ b.to_array())

    def commutator(self, a: BlockOperator, b: BlockOperator) -> BlockOperator:
        self._check_same_polarization(a, b)
        a_array, b_array = a.to_array(), b.to_array()
        return BlockOperator.from_array(a_array @ b_array - b_array @ a_array)

    def inverse(self, a: BlockOperator) -> BlockOperator:
        return BlockOperator.from_array(self.kernel.inverse(a.to_array()))

    @staticmethod
    def conj_op(a: BlockOperator) -> BlockOperator:
        """
        Returns a-bar, defined by a-bar(u) = conj(a(conj(u))).

        In the fixed basis the conjugation swaps f_k and f_{n+k}, so a-bar is the entrywise
        conjugate with both block rows and block columns swapped: (a-bar)++ = conj(a--),
        (a-bar)+- = conj(a-+), and so on. Real-form operators [[g, h], [h-bar, g-bar]] are fixed.
        """

        return BlockOperator(n=a.n, pp=a.mm.conj(), pm=a.mp.conj(), mp=a.pm.conj(), mm=a.pp.conj())

    @staticmethod
    def transpose_op(h: np.ndarray) -> np.ndarray:
        # h^T := (h-bar)^*, which in the fixed basis is the plain transpose
        return np.asarray(h).T.copy()

    @staticmethod
    def conj_vector(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        n = u.shape[0] // 2
        return np.concatenate([u[n:], u[:n]]).conj()

    @staticmethod
    def d_operator(n: int) -> BlockOperator:
        """
        Returns d = i(p+ - p-), which is also the complex structure J in the eigenbasis.
        """

        identity = np.eye(n)
        zeros = np.zeros((n, n))
        return BlockOperator(n=n, pp=1j * identity, pm=zeros, mp=zeros, mm=-1j * identity)

    @staticmethod
    def commutator_with_d(a: BlockOperator) -> BlockOperator:
        zeros = np.zeros((a.n, a.n))
        return BlockOperator(n=a.n, pp=zeros, pm=2j * a.pm, mp=-2j * a.mp, mm=zeros)

    def restricted_norm(self, a: BlockOperator) -> float:
        """
        ||A||_res = ||A|| + ||[d, A]||_2. Reported as a diagnostic: at finite truncation it is
        always finite.
        """

        return self.kernel.op_norm(a.to_array()) + self.kernel.hs_norm(self.commutator_with_d(a).to_array())

    @staticmethod
    def restricted_trace(mu: BlockOperator) -> complex:
        return complex(np.trace(mu.pp) + np.trace(mu.mm))

    def pairing(self, mu: PredualElement, gamma: complex, b_op: BlockOperator, b: complex) -> complex:
        """
        The duality pairing <(mu, gamma), (B, b)> = Tr_res(mu B) + gamma b.

        Parameters
        ----------
        mu : PredualElement
            The predual part.
        gamma : complex
            The central coordinate of the predual element.
        b_op : BlockOperator
            The Lie algebra part.
        b : complex
            The central coordinate of the Lie algebra element.

        Returns
        -------
        complex
            The pairing value.

        Raises
        ------
        PolarizedSpaceException
            If the operators do not share a polarization.
        """

        return self.restricted_trace(self.multiply(mu, b_op)) + complex(gamma) * complex(b)

    @staticmethod
    def matrix_units(polarization: Polarization) -> Iterator[tuple[tuple[int, int], BlockOperator]]:
        size = polarization.dimension

        for row in range(size):
            for col in range(size):
                unit = np.zeros((size, size))
                unit[row, col] = 1.0
                yield (row, col), BlockOperator.from_array(unit)
