from pathlib import Path

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Tolerances(BaseModel):
    """
    Every numerical threshold used by the services and property suites.

    Attributes
    ----------
    exp : float
        Relative accuracy expected from the matrix exponential.
    hermitian : float
        Relative Frobenius tolerance for accepting a matrix as Hermitian.
    positive_definite : float
        Relative (to the operator norm) eigenvalue threshold for strict positivity.
    funcalc : float
        Agreement between the Hermitian functional calculus and direct evaluation.
    membership : float
        Absolute Frobenius tolerance on group / algebra / disc membership residuals.
    algebraic : float
        Algebraic identities (cocycle laws, duality, Jacobi).
    identity : float
        Identities that involve no inversion (trace cyclicity, involutions).
    trace : float
        Relative tolerance for the conjugation invariance of the restricted trace.
    inverse_chain : float
        Anything that goes through a matrix inverse or exponential.
    boundary : float
        Relaxed tolerance for near-boundary disc points.
    finite_difference : float
        Agreement with central finite differences.
    fd_step : float
        The finite-difference step.
    invariance : float
        Relative tolerance for metric and Kahler-form invariance.
    isotropy : float
        Residual allowed for isotropy elements fixing (0, gamma).
    displacement : float
        Minimal displacement of (0, gamma) under a non-isotropy element.
    golden : float
        Hand-derived scalar values.
    reality : float
        Imaginary part allowed in the KKS form of real-form inputs.
    degenerate : float
        Below this |omega_D| a form comparison is inconclusive.
    symplecto : float
        Relative residual for the orbit/disc symplectomorphism.
    condition : float
        Largest condition number accepted before a matrix counts as singular.
    artanh_margin : float
        Eigenvalues of Z*Z must stay below 1 - artanh_margin.
    series : float
        Term-norm cut-off of the power-series oracle.
    """

    exp: float = 1e-12
    hermitian: float = 1e-10
    positive_definite: float = 1e-10
    funcalc: float = 1e-9
    membership: float = 1e-9
    algebraic: float = 1e-9
    identity: float = 1e-10
    trace: float = 1e-8
    inverse_chain: float = 1e-8
    boundary: float = 1e-6
    finite_difference: float = 1e-6
    fd_step: float = 1e-5
    invariance: float = 1e-7
    isotropy: float = 1e-10
    displacement: float = 1e-6
    golden: float = 1e-12
    reality: float = 1e-12
    degenerate: float = 1e-12
    symplecto: float = 1e-9
    condition: float = 1e12
    artanh_margin: float = 1e-8
    series: float = 1e-14


class RunConfig(BaseSettings):
    """
    Represents the run configuration shared by every command.

    Values come, in decreasing priority, from explicit keyword arguments (the CLI flags),
    `ORBIT_`-prefixed environment variables and a `.env` file.

    Attributes
    ----------
    n : int
        The truncation dimension of H+ (and H-).
    gamma : float
        The central coordinate of the orbit through (0, gamma).
    seed : int
        Base seed; trial i of a property suite uses seed + i.
    trials : int
        Randomized instances per check.
    workers : int
        Thread pool size for property trials.
    sample_scale : float
        Operator-norm scale of random Lie algebra samples.
    output_path : Path | None
        Where to write the JSON document; stdout when unset.
    log_level : str
        Level of the stderr log sink.
    tolerances : Tolerances
        The tolerance ladder.

    model_config : SettingsConfigDict
        Configuration for loading environment variables from a `.env` file.
    """

    n: int = Field(default=4, ge=1)
    gamma: float = 1.0
    seed: int = 42
    trials: int = Field(default=100, ge=1)
    workers: int = Field(default=1, ge=1)
    sample_scale: float = Field(default=0.5, gt=0)
    output_path: Path | None = None
    log_level: str = "WARNING"

    tolerances: Tolerances = Tolerances()

    model_config = SettingsConfigDict(
        env_prefix="ORBIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore"
    )

    def echo(self) -> dict:
        return self.model_dump(mode="json", exclude={"output_path", "log_level", "workers"})
