import math
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, model_validator


class ComplexMatrix(BaseModel):
    """
    JSON carrier for a dense complex matrix.

    Attributes
    ----------
    rows : int
        The number of rows.
    cols : int
        The number of columns.
    entries : list[tuple[float, float]]
        The entries as (real, imaginary) pairs in row-major order.
    """

    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: list[tuple[float, float]]

    @model_validator(mode="after")
    def _check_entries(self) -> "ComplexMatrix":
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"Expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )

        if not all(math.isfinite(re) and math.isfinite(im) for re, im in self.entries):
            raise ValueError("Matrix entries must be finite")

        return self

    @classmethod
    def from_array(cls, array: np.ndarray) -> "ComplexMatrix":
        array = np.asarray(array, dtype=complex)
        rows, cols = array.shape
        entries = [(float(z.real), float(z.imag)) for z in array.ravel()]
        return cls(rows=rows, cols=cols, entries=entries)

    def to_array(self) -> np.ndarray:
        values = [complex(re, im) for re, im in self.entries]
        return np.array(values, dtype=complex).reshape(self.rows, self.cols)


def _parse_matrix(value: Any) -> np.ndarray:
    if isinstance(value, ComplexMatrix):
        array = value.to_array()
    elif isinstance(value, dict):
        array = ComplexMatrix(**value).to_array()
    else:
        array = np.array(value, dtype=complex)

    if array.ndim != 2:
        raise ValueError(f"Expected a two-dimensional matrix, got {array.ndim} dimension(s)")

    if not np.all(np.isfinite(array)):
        raise ValueError("Matrix entries must be finite")

    array.setflags(write=False)
    return array


def _dump_matrix(array: np.ndarray) -> dict:
    return ComplexMatrix.from_array(array).model_dump()


def _parse_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("Complex scalars are encoded as [re, im]")
        return complex(float(value[0]), float(value[1]))

    return complex(value)


def _dump_complex(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


Matrix = Annotated[
    np.ndarray,
    BeforeValidator(_parse_matrix),
    PlainSerializer(_dump_matrix, return_type=dict)
]

ComplexScalar = Annotated[
    complex,
    BeforeValidator(_parse_complex),
    PlainSerializer(_dump_complex, return_type=list)
]


class ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def _check_square_blocks(self, n: int, *names: str):
        for name in names:
            shape = getattr(self, name).shape
            if shape != (n, n):
                raise ValueError(f"Block '{name}' has shape {shape}, expected ({n}, {n})")


class Polarization(BaseModel):
    """
    The splitting H = H+ (+) H- with dim H+ = dim H- = n.

    The basis convention is fixed: f_1..f_n span H+, f_{n+1}..f_{2n} span H-, and the
    conjugation maps f_k to f_{n+k}. In that basis "bar" is entrywise conjugation with a
    swap of the block roles and the transpose h^T = (h-bar)^* is the plain matrix transpose.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)

    @property
    def dimension(self) -> int:
        return 2 * self.n


class BlockOperator(ArrayModel):
    """
    An operator on H = H+ (+) H- stored as its four n x n blocks.

    Attributes
    ----------
    n : int
        The dimension of H+ (and of H-).
    pp : np.ndarray
        The block a++ (H+ -> H+).
    pm : np.ndarray
        The block a+- (H- -> H+).
    mp : np.ndarray
        The block a-+ (H+ -> H-).
    mm : np.ndarray
        The block a-- (H- -> H-).
    """

    n: int = Field(ge=1)
    pp: Matrix
    pm: Matrix
    mp: Matrix
    mm: Matrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "BlockOperator":
        self._check_square_blocks(self.n, "pp", "pm", "mp", "mm")
        return self

    @property
    def polarization(self) -> Polarization:
        return Polarization(n=self.n)

    def to_array(self) -> np.ndarray:
        return np.block([[self.pp, self.pm], [self.mp, self.mm]])

    @classmethod
    def from_array(cls, array: np.ndarray):
        array = np.asarray(array, dtype=complex)
        rows, cols = array.shape

        if rows != cols or rows % 2 != 0 or rows == 0:
            raise ValueError(f"Expected a non-empty square matrix of even size, got shape {array.shape}")

        n = rows // 2
        return cls(n=n, pp=array[:n, :n], pm=array[:n, n:], mp=array[n:, :n], mm=array[n:, n:])


class PredualElement(BlockOperator):
    """
    An element mu of the predual (gl_res)_*.

    Structurally a BlockOperator; kept as its own type so that predual and Lie algebra
    arguments cannot be swapped silently. At finite truncation the trace-class condition
    on the diagonal blocks holds automatically.
    """

    pass


class SymplecticElement(ArrayModel):
    """
    A member of Sp_res in block form [[g, h], [h-bar, g-bar]].

    Only (g, h) are stored; the conjugate blocks are always derived.
    """

    n: int = Field(ge=1)
    g: Matrix
    h: Matrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "SymplecticElement":
        self._check_square_blocks(self.n, "g", "h")
        return self

    def to_block(self) -> BlockOperator:
        return BlockOperator(n=self.n, pp=self.g, pm=self.h, mp=self.h.conj(), mm=self.g.conj())

    def to_array(self) -> np.ndarray:
        return self.to_block().to_array()

    @classmethod
    def from_array(cls, array: np.ndarray) -> "SymplecticElement":
        block = BlockOperator.from_array(array)
        return cls(n=block.n, g=block.pp, h=block.pm)

    @classmethod
    def identity(cls, n: int) -> "SymplecticElement":
        return cls(n=n, g=np.eye(n), h=np.zeros((n, n)))


class SpAlgebraElement(ArrayModel):
    """
    A member of sp_res in block form [[A1, A2], [A2-bar, A1-bar]] with A1 skew-Hermitian
    and A2 symmetric.
    """

    n: int = Field(ge=1)
    a1: Matrix
    a2: Matrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "SpAlgebraElement":
        self._check_square_blocks(self.n, "a1", "a2")
        return self

    def to_block(self) -> BlockOperator:
        return BlockOperator(n=self.n, pp=self.a1, pm=self.a2, mp=self.a2.conj(), mm=self.a1.conj())

    def to_array(self) -> np.ndarray:
        return self.to_block().to_array()

    def scaled(self, factor: float) -> "SpAlgebraElement":
        return SpAlgebraElement(n=self.n, a1=factor * self.a1, a2=factor * self.a2)


class SiegelPoint(ArrayModel):
    n: int = Field(ge=1)
    z: Matrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "SiegelPoint":
        self._check_square_blocks(self.n, "z")
        return self


class SiegelTangent(ArrayModel):
    n: int = Field(ge=1)
    v: Matrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "SiegelTangent":
        self._check_square_blocks(self.n, "v")
        return self


class ExtendedAlgebraElement(ArrayModel):
    """
    An element (A, lambda) of the centrally extended algebra gl_res (+) C.

    The central coordinate follows the identification [B, q] -> (B, -2i Tr(B++ - q)).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, populate_by_name=True)

    op: BlockOperator
    lam: ComplexScalar = Field(default=0j, alias="lambda")


class ExtendedPredual(ArrayModel):
    mu: PredualElement
    gamma: ComplexScalar


class ExtendedGroupElement(ArrayModel):
    """
    A representative (a, phase) of the central extension at finite truncation.

    In finite dimensions the extension is trivial, so the pair multiplies componentwise.
    Every action depends on the a-part only.
    """

    a: BlockOperator
    phase: ComplexScalar = 1 + 0j

    @model_validator(mode="after")
    def _check_phase(self) -> "ExtendedGroupElement":
        if self.phase == 0:
            raise ValueError("The central phase of an extended group element must be non-zero")
        return self


class MembershipResult(BaseModel):
    """
    Outcome of a membership predicate.

    Attributes
    ----------
    is_member : bool
        Whether every gated residual is within tolerance.
    residuals : dict[str, float]
        The named Frobenius residuals, including diagnostic-only cross-checks.
    """

    is_member: bool
    residuals: dict[str, float]


class DiscMembership(BaseModel):
    is_member: bool
    symmetry_residual: float
    min_eigenvalue: float
    dual_min_eigenvalue: float


class SymplectomorphismCheck(BaseModel):
    """
    Comparison of the pulled-back orbit form with the Siegel Kahler form at the origin.

    Attributes
    ----------
    omega_d : float
        The Kahler form of the disc at 0 evaluated on (A2, B2).
    omega_hat : float
        The pulled-back orbit form.
    kks : float
        The KKS form at (0, gamma).
    constant : float
        The proportionality constant -4 gamma.
    ratio : float | None
        omega_hat / omega_d, None when the pair is degenerate.
    residual : float
        |omega_hat - constant * omega_d|.
    inconclusive : bool
        True when |omega_d| is below the degeneracy threshold.
    passed : bool
        True when the residual is within tolerance.
    """

    omega_d: float
    omega_hat: float
    kks: float
    constant: float
    ratio: float | None
    residual: float
    inconclusive: bool
    passed: bool


class FormsReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    omega_d: float = Field(alias="omega_D")
    omega_hat: float
    kks: float
    ratio: float | None
    residual: float
    degenerate: bool
    gamma: float


class CheckRecord(BaseModel):
    """
    Aggregated outcome of one invariant over all trials.

    `max_residual` is infinite (serialized as null) when a trial raised; `error` then holds
    the first error message.
    """

    name: str
    trials: int
    max_residual: float
    tolerance: float
    passed: bool
    error: str | None = None


class Report(BaseModel):
    """
    Machine-readable outcome of a property suite run.

    Attributes
    ----------
    suite : str
        The suite that was run.
    records : list[CheckRecord]
        One record per check, in registration order.
    config : dict
        Echo of the run configuration.
    version : str
        The package version that produced the report.
    passed : bool
        True iff every record passed.
    """

    suite: str
    records: list[CheckRecord]
    config: dict
    version: str
    passed: bool

    @property
    def failed_checks(self) -> list[str]:
        return [record.name for record in self.records if not record.passed]
