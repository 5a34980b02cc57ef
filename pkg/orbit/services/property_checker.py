from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import pandas as pd
from loguru import logger

from orbit import __version__
from orbit.data_structures.enums import CheckSuite, CompositionOrder
from orbit.data_structures.models import (
    BlockOperator,
    CheckRecord,
    ExtendedAlgebraElement,
    PredualElement,
    Report,
    SiegelPoint,
    SiegelTangent,
    SpAlgebraElement,
    SymplecticElement
)
from orbit.services.coadjoint_orbit import CoadjointOrbit, CoadjointOrbitException
from orbit.services.numerics_kernel import NumericsKernel, NumericsKernelException
from orbit.services.polarized_space import PolarizedSpace, PolarizedSpaceException
from orbit.services.siegel_disc import SiegelDisc, SiegelDiscException
from orbit.services.symplectic_group import SymplecticGroup, SymplecticGroupException
from orbit.settings import RunConfig

DOMAIN_EXCEPTIONS = (
    NumericsKernelException,
    PolarizedSpaceException,
    SymplecticGroupException,
    SiegelDiscException,
    CoadjointOrbitException
)

# size of the perturbation that pushes injected samples off their manifold
CORRUPTION = 1e-2


class PropertyCheckerException(Exception):
    """
    Raised when a suite or an injected check name is unknown.

    Parameters
    ----------
    message : str
        The error message describing the failure.
    """

    def __init__(self, message: str):
        super().__init__(message)


class Sampler:
    """
    Draws the random inputs of one trial from a single seeded generator.

    When `corrupted` is set, structured samples are pushed off their manifold: group elements
    lose the symplectic relations, algebra elements get a non-symmetric A2, isotropy elements
    stop being unitary and disc points leave the disc.
    """

    def __init__(
            self,
            kernel: NumericsKernel,
            symplectic_group: SymplecticGroup,
            siegel_disc: SiegelDisc,
            coadjoint_orbit: CoadjointOrbit,
            n: int,
            scale: float,
            rng: np.random.Generator,
            corrupted: bool = False
    ):
        self.kernel = kernel
        self.symplectic_group = symplectic_group
        self.siegel_disc = siegel_disc
        self.coadjoint_orbit = coadjoint_orbit
        self.n = n
        self.scale = scale
        self.rng = rng
        self.corrupted = corrupted

    def _noise(self, shape: tuple[int, ...]) -> np.ndarray:
        return CORRUPTION * self.kernel.random_complex(self.rng, shape)

    def matrix(self, rows: int, cols: int | None = None) -> np.ndarray:
        return self.kernel.random_complex(self.rng, (rows, rows if cols is None else cols), self.scale)

    def vector(self, size: int) -> np.ndarray:
        return self.kernel.random_complex(self.rng, (size,))

    def block(self) -> BlockOperator:
        return BlockOperator.from_array(self.matrix(2 * self.n))

    def invertible(self) -> BlockOperator:
        return BlockOperator.from_array(self.kernel.mat_exp(self.matrix(2 * self.n)))

    def predual(self, gamma: float) -> PredualElement:
        return self.coadjoint_orbit.random_predual(self.n, gamma, self.scale, self.rng).mu

    def gamma(self) -> float:
        return float(self.rng.choice([-1.0, 1.0]) * self.rng.uniform(0.5, 2.0))

    def sp_algebra(self) -> SpAlgebraElement:
        a = self.symplectic_group.random_sp_algebra(self.n, self.scale, self.rng)

        if self.corrupted:
            # a real shift of A1 breaks skew-Hermiticity for every n, including n = 1
            return SpAlgebraElement(n=self.n, a1=a.a1 + CORRUPTION * np.eye(self.n), a2=a.a2)

        return a

    def symplectic(self) -> SymplecticElement:
        a = self.symplectic_group.random_symplectic(self.n, self.scale, self.rng)

        if self.corrupted:
            return SymplecticElement(n=self.n, g=a.g, h=a.h + self._noise((self.n, self.n)))

        return a

    def isotropy(self) -> SymplecticElement:
        u = self.symplectic_group.random_unitary_isotropy(self.n, self.rng)

        if self.corrupted:
            # every block-diagonal element fixes (0, gamma), so only an h-part can break isotropy
            return SymplecticElement(n=self.n, g=u.g, h=self._noise((self.n, self.n)))

        return u

    def disc_point(self, radius: float = 0.9) -> SiegelPoint:
        if self.corrupted:
            return self.siegel_disc.random_point_on_sphere(self.n, self.rng, norm=1.05)

        return self.siegel_disc.random_point(self.n, self.rng, radius=radius)

    def disc_point_on_sphere(self, norm: float) -> SiegelPoint:
        return self.siegel_disc.random_point_on_sphere(self.n, self.rng, norm=1.05 if self.corrupted else norm)

    def tangent(self) -> SiegelTangent:
        v = self.siegel_disc.random_tangent(self.n, self.rng).v
        return SiegelTangent(n=self.n, v=v / self.kernel.hs_norm(v))


@dataclass(frozen=True)
class PropertyCheck:
    """
    A named invariant evaluated on random trials.

    Attributes
    ----------
    name : str
        Dotted name, "<suite>.<invariant>".
    suite : CheckSuite
        The suite the check belongs to.
    tolerance : float
        A trial passes iff its residual is at most this value.
    evaluate : Callable[[Sampler], float]
        Computes the residual of one trial.
    injectable : bool
        Whether corrupted samples are guaranteed to make the check fail.
    """

    name: str
    suite: CheckSuite
    tolerance: float
    evaluate: Callable[[Sampler], float]
    injectable: bool = False


def _relative(residual: float, scale: float) -> float:
    return residual / max(1.0, scale)


class PropertyChecker:
    """
    Runs the randomized invariant suites and assembles a Report.

    Trial i of every check draws its inputs from `numpy.random.default_rng(seed + i)`, so
    residuals are reproducible and independent of the worker count.

    Attributes
    ----------
    kernel : NumericsKernel
        The dense linear algebra primitives.
    polarized_space : PolarizedSpace
        The block calculus.
    symplectic_group : SymplecticGroup
        The group and algebra service.
    siegel_disc : SiegelDisc
        The disc service.
    coadjoint_orbit : CoadjointOrbit
        The central extension and orbit service.
    settings : RunConfig
        Dimension, seed, trial count, workers and tolerances.
    checks : list[PropertyCheck]
        Every check, in registration order.

    Methods
    -------
    run(suite, inject_violation=None)
        Runs the checks of a suite and returns the Report.
    """

    def __init__(
            self,
            kernel: NumericsKernel,
            polarized_space: PolarizedSpace,
            symplectic_group: SymplecticGroup,
            siegel_disc: SiegelDisc,
            coadjoint_orbit: CoadjointOrbit,
            settings: RunConfig
    ):
        self.kernel = kernel
        self.polarized_space = polarized_space
        self.symplectic_group = symplectic_group
        self.siegel_disc = siegel_disc
        self.coadjoint_orbit = coadjoint_orbit
        self.settings = settings
        self.checks = self._register_checks()

    def _register_checks(self) -> list[PropertyCheck]:
        tol = self.settings.tolerances
        kernel, polarized, symplectic = CheckSuite.KERNEL, CheckSuite.POLARIZED, CheckSuite.SYMPLECTIC
        siegel, coadjoint = CheckSuite.SIEGEL, CheckSuite.COADJOINT

        return [
            PropertyCheck("kernel.exp_inverse", kernel, tol.inverse_chain, self._kernel_exp_inverse),
            PropertyCheck("kernel.funcalc_exp", kernel, tol.funcalc, self._kernel_funcalc_exp),
            PropertyCheck("kernel.hs_unitary_invariance", kernel, tol.identity, self._kernel_hs_unitary_invariance),
            PropertyCheck("kernel.congruence_positivity", kernel, tol.positive_definite, self._kernel_congruence),

            PropertyCheck("polarized.conj_multiplicative", polarized, tol.identity, self._conj_multiplicative),
            PropertyCheck("polarized.conj_involution", polarized, tol.identity, self._conj_involution),
            PropertyCheck("polarized.transpose_reverses", polarized, tol.identity, self._transpose_reverses),
            PropertyCheck("polarized.trace_cyclic", polarized, tol.identity, self._trace_cyclic),
            PropertyCheck("polarized.trace_conjugation_invariance", polarized, tol.trace, self._trace_conjugation),
            PropertyCheck("polarized.pairing_nondegenerate", polarized, tol.identity, self._pairing_nondegenerate),

            PropertyCheck("symplectic.closure", symplectic, tol.membership, self._closure, True),
            PropertyCheck("symplectic.inverse", symplectic, tol.membership, self._inverse, True),
            PropertyCheck("symplectic.omega_invariance", symplectic, tol.membership, self._omega_invariance, True),
            PropertyCheck("symplectic.derived_identities", symplectic, tol.membership, self._derived_identities, True),
            PropertyCheck("symplectic.index_zero", symplectic, tol.membership, self._index_zero),
            PropertyCheck("symplectic.algebra_membership", symplectic, tol.membership, self._algebra_membership, True),
            PropertyCheck("symplectic.exp_inverse", symplectic, tol.inverse_chain, self._group_exp_inverse, True),
            PropertyCheck("symplectic.real_form", symplectic, tol.inverse_chain, self._real_form),

            PropertyCheck("siegel.action_law", siegel, tol.inverse_chain, self._action_law),
            PropertyCheck("siegel.isotropy", siegel, tol.inverse_chain, self._disc_isotropy, True),
            PropertyCheck("siegel.transitivity", siegel, tol.inverse_chain, self._transitivity, True),
            PropertyCheck("siegel.transitivity_near_boundary", siegel, tol.boundary, self._transitivity_boundary, True),
            PropertyCheck("siegel.series_oracle", siegel, tol.funcalc, self._series_oracle),
            PropertyCheck("siegel.tangent_finite_difference", siegel, tol.finite_difference, self._tangent_fd),
            PropertyCheck("siegel.metric_invariance", siegel, tol.invariance, self._metric_invariance, True),
            PropertyCheck("siegel.kahler_invariance", siegel, tol.invariance, self._kahler_invariance, True),
            PropertyCheck("siegel.metric_positivity", siegel, tol.invariance, self._metric_positivity),
            PropertyCheck("siegel.zz_transpose_identity", siegel, tol.identity, self._zz_transpose),
            PropertyCheck("siegel.sp2_distance", siegel, tol.identity, self._sp2_distance),
            PropertyCheck("siegel.coset_to_disc", siegel, tol.inverse_chain, self._coset_to_disc),
            PropertyCheck("siegel.origin_metric", siegel, tol.identity, self._origin_metric),

            PropertyCheck("coadjoint.schwinger_cocycle", coadjoint, tol.algebraic, self._schwinger_cocycle),
            PropertyCheck("coadjoint.extended_jacobi", coadjoint, tol.algebraic, self._extended_jacobi),
            PropertyCheck("coadjoint.sigma_cocycle", coadjoint, tol.algebraic, self._sigma_cocycle),
            PropertyCheck("coadjoint.composition", coadjoint, tol.inverse_chain, self._composition),
            PropertyCheck("coadjoint.duality", coadjoint, tol.algebraic, self._duality),
            PropertyCheck("coadjoint.ad_star_derivative", coadjoint, tol.finite_difference, self._ad_star_derivative),
            PropertyCheck("coadjoint.kks_reality", coadjoint, tol.reality, self._kks_reality),
            PropertyCheck("coadjoint.isotropy_fixed", coadjoint, tol.isotropy, self._isotropy_fixed, True),
            PropertyCheck("coadjoint.non_isotropy_moves", coadjoint, 0.0, self._non_isotropy_moves),
            PropertyCheck("coadjoint.orbit_consistency", coadjoint, tol.inverse_chain, self._orbit_consistency, True),
            PropertyCheck("coadjoint.lambda_independence", coadjoint, tol.identity, self._lambda_independence),
            PropertyCheck("coadjoint.affine_composition", coadjoint, tol.inverse_chain, self._affine_composition),
            PropertyCheck("coadjoint.coset_invariance", coadjoint, tol.membership, self._coset_invariance, True),
            PropertyCheck("coadjoint.orbit_round_trip", coadjoint, tol.inverse_chain, self._orbit_round_trip, True),
            PropertyCheck("coadjoint.pullback_equals_kks", coadjoint, tol.identity, self._pullback_equals_kks),
            PropertyCheck("coadjoint.symplectomorphism", coadjoint, tol.symplecto, self._symplectomorphism, True),
            PropertyCheck("coadjoint.gamma_scaling", coadjoint, tol.golden, self._gamma_scaling),
            PropertyCheck("coadjoint.proportionality_constant", coadjoint, tol.golden, self._proportionality)
        ]

    def checks_for(self, suite: CheckSuite) -> list[PropertyCheck]:
        if suite == CheckSuite.ALL:
            return list(self.checks)
        return [check for check in self.checks if check.suite == suite]

    @property
    def injectable_checks(self) -> list[str]:
        return [check.name for check in self.checks if check.injectable]

    def validate_injection(self, suite: CheckSuite, name: str):
        """
        Ensures an injected check exists, can be violated and is part of the suite.

        Raises
        ------
        PropertyCheckerException
            If any of the three conditions fails.
        """

        names = [check.name for check in self.checks_for(suite)]

        if name not in self.injectable_checks:
            error_message = f"Cannot inject a violation into '{name}'; choose one of {self.injectable_checks}"
            logger.error(error_message)
            raise PropertyCheckerException(error_message)

        if name not in names:
            error_message = f"Check '{name}' is not part of suite '{suite.value}'"
            logger.error(error_message)
            raise PropertyCheckerException(error_message)

    @cached_property
    def composition_order(self) -> CompositionOrder:
        return self.coadjoint_orbit.determine_composition_order(seed=self.settings.seed, scale=self.settings.sample_scale)

    @property
    def scale(self) -> float:
        return self.settings.sample_scale / np.sqrt(self.settings.n)

    def _run_trial(self, check: PropertyCheck, trial: int, corrupted: bool) -> dict:
        sampler = Sampler(
            kernel=self.kernel,
            symplectic_group=self.symplectic_group,
            siegel_disc=self.siegel_disc,
            coadjoint_orbit=self.coadjoint_orbit,
            n=self.settings.n,
            scale=self.scale,
            rng=np.random.default_rng(self.settings.seed + trial),
            corrupted=corrupted
        )

        try:
            residual = float(check.evaluate(sampler))
            error = None
        except DOMAIN_EXCEPTIONS as e:
            residual = float("inf")
            error = f"{type(e).__name__}: {e}"

        if np.isnan(residual):
            residual = float("inf")

        return {"check": check.name, "trial": trial, "residual": residual, "error": error}

    def _run_check(self, check: PropertyCheck, corrupted: bool, executor: ThreadPoolExecutor | None) -> list[dict]:
        trials = range(self.settings.trials)

        if executor is None:
            return [self._run_trial(check, trial, corrupted) for trial in trials]

        return list(executor.map(lambda trial: self._run_trial(check, trial, corrupted), trials))

    def run(self, suite: CheckSuite, inject_violation: str | None = None) -> Report:
        """
        Runs every check of `suite` for `trials` seeded trials.

        Parameters
        ----------
        suite : CheckSuite
            The suite to run; ALL runs every registered check.
        inject_violation : str, optional
            Name of a check whose samples are corrupted so that it must fail.

        Returns
        -------
        Report
            One record per check in registration order; passed iff every record passed.

        Raises
        ------
        PropertyCheckerException
            If `inject_violation` names a check that cannot be violated or is not in the suite.
        """

        if inject_violation is not None:
            self.validate_injection(suite, inject_violation)

        checks = self.checks_for(suite)
        rows = []

        executor = ThreadPoolExecutor(max_workers=self.settings.workers) if self.settings.workers > 1 else None

        try:
            for check in checks:
                rows.extend(self._run_check(check, check.name == inject_violation, executor))
        finally:
            if executor is not None:
                executor.shutdown()

        records = self._aggregate(checks, pd.DataFrame(rows))

        for record in records:
            logger.info(f"{record.name}: max residual {record.max_residual:.3e} (tolerance {record.tolerance:.1e})")
            if not record.passed:
                logger.warning(f"Check failed: {record.name} - {record.error or 'residual above tolerance'}")

        config = self.settings.echo()
        config["inject_violation"] = inject_violation

        return Report(
            suite=suite.value,
            records=records,
            config=config,
            version=__version__,
            passed=all(record.passed for record in records)
        )

    @staticmethod
    def _aggregate(checks: list[PropertyCheck], df: pd.DataFrame) -> list[CheckRecord]:
        summary = df.groupby("check", sort=False).agg(
            trials=("trial", "count"),
            max_residual=("residual", "max"),
            error=("error", "first")
        )

        records = []

        for check in checks:
            row = summary.loc[check.name]
            max_residual = float(row["max_residual"])

            records.append(CheckRecord(
                name=check.name,
                trials=int(row["trials"]),
                max_residual=max_residual,
                tolerance=check.tolerance,
                passed=bool(max_residual <= check.tolerance),
                error=None if pd.isna(row["error"]) else str(row["error"])
            ))

        return records

    # kernel

    def _kernel_exp_inverse(self, sample: Sampler) -> float:
        a = sample.matrix(2 * sample.n)
        product = self.kernel.mat_exp(a) @ self.kernel.mat_exp(-a)
        return self.kernel.hs_norm(product - np.eye(2 * sample.n))

    def _kernel_funcalc_exp(self, sample: Sampler) -> float:
        x = sample.matrix(sample.n)
        h = x @ x.conj().T
        direct = self.kernel.mat_exp(h)
        spectral = self.kernel.herm_funcalc(h, np.exp)
        return _relative(self.kernel.hs_norm(direct - spectral), self.kernel.hs_norm(direct))

    def _kernel_hs_unitary_invariance(self, sample: Sampler) -> float:
        a = sample.matrix(sample.n)
        u = self.kernel.random_unitary(sample.rng, sample.n)
        v = self.kernel.random_unitary(sample.rng, sample.n)
        norm = self.kernel.hs_norm(a)
        return _relative(abs(self.kernel.hs_norm(u @ a @ v) - norm), norm)

    def _kernel_congruence(self, sample: Sampler) -> float:
        x = sample.matrix(sample.n)
        positive = x @ x.conj().T + np.eye(sample.n)
        g = np.eye(sample.n) + sample.matrix(sample.n)
        return 0.0 if self.kernel.is_positive_definite(g.conj().T @ positive @ g) else 1.0

    # polarized

    def _conj_multiplicative(self, sample: Sampler) -> float:
        a, b = sample.block(), sample.block()
        conj = self.polarized_space.conj_op
        lhs = conj(self.polarized_space.multiply(a, b)).to_array()
        rhs = self.polarized_space.multiply(conj(a), conj(b)).to_array()
        return _relative(self.kernel.hs_norm(lhs - rhs), self.kernel.hs_norm(a.to_array()) * self.kernel.hs_norm(b.to_array()))

    def _conj_involution(self, sample: Sampler) -> float:
        a = sample.block()
        twice = self.polarized_space.conj_op(self.polarized_space.conj_op(a))
        return self.kernel.hs_norm(twice.to_array() - a.to_array())

    def _transpose_reverses(self, sample: Sampler) -> float:
        h, k = sample.matrix(sample.n), sample.matrix(sample.n)
        transpose = self.polarized_space.transpose_op
        residual = self.kernel.hs_norm(transpose(h @ k) - transpose(k) @ transpose(h))
        return _relative(residual, self.kernel.hs_norm(h) * self.kernel.hs_norm(k))

    def _trace_cyclic(self, sample: Sampler) -> float:
        mu, b = sample.block(), sample.block()
        trace = self.polarized_space.restricted_trace
        residual = abs(trace(self.polarized_space.multiply(mu, b)) - trace(self.polarized_space.multiply(b, mu)))
        return _relative(residual, self.kernel.hs_norm(mu.to_array()) * self.kernel.hs_norm(b.to_array()))

    def _trace_conjugation(self, sample: Sampler) -> float:
        mu, a = sample.block(), sample.invertible()
        conjugated = self.polarized_space.multiply(
            self.polarized_space.multiply(a, mu), self.polarized_space.inverse(a)
        )
        trace = self.polarized_space.restricted_trace
        return _relative(abs(trace(conjugated) - trace(mu)), self.kernel.hs_norm(mu.to_array()))

    def _pairing_nondegenerate(self, sample: Sampler) -> float:
        mu = self.polarized_space.as_predual(sample.block())
        recovered = np.zeros((2 * sample.n, 2 * sample.n), dtype=complex)

        # <mu, E_rc> = mu_cr
        for (row, col), unit in self.polarized_space.matrix_units(mu.polarization):
            recovered[col, row] = self.polarized_space.pairing(mu, 0, unit, 0)

        return self.kernel.hs_norm(recovered - mu.to_array())

    # symplectic

    def _closure(self, sample: Sampler) -> float:
        product = self.symplectic_group.compose(sample.symplectic(), sample.symplectic())
        residuals = self.symplectic_group.is_symplectic(product).residuals
        return max(residuals["unitarity"], residuals["symmetry"])

    def _inverse(self, sample: Sampler) -> float:
        a = sample.symplectic()
        inverse = self.symplectic_group.symplectic_inverse(a)
        residuals = self.symplectic_group.is_symplectic(inverse).residuals
        identity = self.kernel.hs_norm(a.to_array() @ inverse.to_array() - np.eye(2 * a.n))
        return max(residuals["unitarity"], residuals["symmetry"], identity)

    def _omega_invariance(self, sample: Sampler) -> float:
        a = sample.symplectic()
        u, v = sample.vector(2 * a.n), sample.vector(2 * a.n)
        array = a.to_array()
        omega = self.symplectic_group.omega_eval
        residual = abs(omega(array @ u, array @ v) - omega(u, v))
        return _relative(residual, float(np.linalg.norm(u) * np.linalg.norm(v)))

    def _derived_identities(self, sample: Sampler) -> float:
        return max(self.symplectic_group.derived_identity_residuals(sample.symplectic()).values())

    def _index_zero(self, sample: Sampler) -> float:
        return max(0.0, -self.symplectic_group.index_zero_margin(sample.symplectic()))

    def _algebra_membership(self, sample: Sampler) -> float:
        return max(self.symplectic_group.is_sp_algebra(sample.sp_algebra()).residuals.values())

    def _group_exp_inverse(self, sample: Sampler) -> float:
        a = sample.sp_algebra()
        forward = self.symplectic_group.exp_to_group(a)
        backward = self.symplectic_group.exp_to_group(a.scaled(-1.0))
        product = self.symplectic_group.compose(forward, backward)
        return self.kernel.hs_norm(product.to_array() - np.eye(2 * a.n))

    def _real_form(self, sample: Sampler) -> float:
        # the full exponential, before (g, h) are extracted
        exponential = BlockOperator.from_array(self.kernel.mat_exp(sample.sp_algebra().to_array()))
        return self.symplectic_group.real_form_residual(exponential)

    # siegel

    def _action_law(self, sample: Sampler) -> float:
        a, b, point = sample.symplectic(), sample.symplectic(), sample.disc_point()
        sequential = self.siegel_disc.mobius_act(a, self.siegel_disc.mobius_act(b, point))
        combined = self.siegel_disc.mobius_act(self.symplectic_group.compose(a, b), point)
        return self.kernel.hs_norm(sequential.z - combined.z)

    def _disc_isotropy(self, sample: Sampler) -> float:
        u, point = sample.isotropy(), sample.disc_point()
        origin = SiegelPoint(n=sample.n, z=np.zeros((sample.n, sample.n)))
        moved_origin = self.kernel.hs_norm(self.siegel_disc.mobius_act(u, origin).z)
        image = self.siegel_disc.mobius_act(u, point).z
        return max(moved_origin, self.kernel.hs_norm(image - u.g @ point.z @ u.g.T))

    def _transitivity_residual(self, point: SiegelPoint) -> float:
        element = self.siegel_disc.transitive_element(point)
        origin = SiegelPoint(n=point.n, z=np.zeros((point.n, point.n)))
        return self.kernel.hs_norm(self.siegel_disc.mobius_act(element, origin).z - point.z)

    def _transitivity(self, sample: Sampler) -> float:
        return self._transitivity_residual(sample.disc_point())

    def _transitivity_boundary(self, sample: Sampler) -> float:
        return self._transitivity_residual(sample.disc_point_on_sphere(0.99))

    def _series_oracle(self, sample: Sampler) -> float:
        point = sample.disc_point()
        spectral = self.siegel_disc.transitive_generator(point)
        series = self.siegel_disc.transitive_generator_series(point)
        return _relative(self.kernel.hs_norm(spectral - series), self.kernel.hs_norm(series))

    def _tangent_fd(self, sample: Sampler) -> float:
        a, point, tangent = sample.symplectic(), sample.disc_point(), sample.tangent()
        step = self.settings.tolerances.fd_step

        forward = self.siegel_disc.mobius_act(a, SiegelPoint(n=point.n, z=point.z + step * tangent.v))
        backward = self.siegel_disc.mobius_act(a, SiegelPoint(n=point.n, z=point.z - step * tangent.v))
        difference = (forward.z - backward.z) / (2 * step)

        pushed = self.siegel_disc.mobius_tangent(a, point, tangent).v
        return _relative(self.kernel.hs_norm(difference - pushed), self.kernel.hs_norm(pushed))

    def _invariance_pair(self, sample: Sampler) -> tuple[complex, complex]:
        a, point = sample.symplectic(), sample.disc_point()
        u, v = sample.tangent(), sample.tangent()

        image = self.siegel_disc.mobius_act(a, point)
        pushed_u = self.siegel_disc.mobius_tangent(a, point, u)
        pushed_v = self.siegel_disc.mobius_tangent(a, point, v)

        return self.siegel_disc.siegel_metric(point, u, v), self.siegel_disc.siegel_metric(image, pushed_u, pushed_v)

    def _metric_invariance(self, sample: Sampler) -> float:
        before, after = self._invariance_pair(sample)
        return _relative(abs(after - before), abs(before))

    def _kahler_invariance(self, sample: Sampler) -> float:
        before, after = self._invariance_pair(sample)
        return _relative(abs(after.imag - before.imag), abs(before))

    def _metric_positivity(self, sample: Sampler) -> float:
        point, u = sample.disc_point(), sample.tangent()
        value = self.siegel_disc.siegel_metric(point, u, u)
        return 1.0 if value.real <= 0 else abs(value.imag) / value.real

    def _zz_transpose(self, sample: Sampler) -> float:
        return self.siegel_disc.zz_transpose_residual(sample.disc_point())

    def _sp2_distance(self, sample: Sampler) -> float:
        a = sample.symplectic()
        expected = 2 * self.kernel.hs_norm(a.g - np.eye(a.n)) ** 2 + 2 * self.kernel.hs_norm(a.h) ** 2
        distance = self.siegel_disc.sp2_distance(a)
        return _relative(abs(distance ** 2 - expected), expected)

    def _coset_to_disc(self, sample: Sampler) -> float:
        a, u = sample.symplectic(), sample.isotropy()
        origin = SiegelPoint(n=a.n, z=np.zeros((a.n, a.n)))

        z = self.siegel_disc.coset_to_disc(a).z
        via_action = self.siegel_disc.mobius_act(a, origin).z
        via_coset = self.siegel_disc.coset_to_disc(self.symplectic_group.compose(a, u)).z

        return max(self.kernel.hs_norm(z - via_action), self.kernel.hs_norm(z - via_coset))

    def _origin_metric(self, sample: Sampler) -> float:
        a, b = sample.sp_algebra(), sample.sp_algebra()
        u, v = SiegelTangent(n=a.n, v=a.a2), SiegelTangent(n=b.n, v=b.a2)
        origin = SiegelPoint(n=a.n, z=np.zeros((a.n, a.n)))

        at_origin = self.siegel_disc.origin_metric(u, v)
        general = self.siegel_disc.siegel_metric(origin, u, v)
        coset = self.siegel_disc.coset_metric(a, b)
        kahler = self.siegel_disc.coset_kahler(a, b)

        residual = max(abs(at_origin - general), abs(at_origin - coset), abs(kahler - general.imag))
        return _relative(residual, abs(at_origin))

    # coadjoint

    def _schwinger_cocycle(self, sample: Sampler) -> float:
        a, b, c = sample.block(), sample.block(), sample.block()
        bracket = self.polarized_space.commutator
        s = self.coadjoint_orbit.schwinger

        cyclic = s(bracket(a, b), c) + s(bracket(b, c), a) + s(bracket(c, a), b)
        antisymmetry = s(a, b) + s(b, a)
        scale = self.kernel.hs_norm(a.to_array()) * self.kernel.hs_norm(b.to_array()) * self.kernel.hs_norm(c.to_array())

        return max(_relative(abs(cyclic), scale), abs(antisymmetry))

    def _extended_jacobi(self, sample: Sampler) -> float:
        x, y, z = (ExtendedAlgebraElement(op=sample.block(), lam=complex(*sample.rng.standard_normal(2))) for _ in range(3))
        bracket = self.coadjoint_orbit.extended_bracket

        terms = [bracket(bracket(x, y), z), bracket(bracket(y, z), x), bracket(bracket(z, x), y)]
        op_sum = sum(term.op.to_array() for term in terms)
        lam_sum = sum(complex(term.lam) for term in terms)

        scale = np.prod([self.kernel.hs_norm(element.op.to_array()) for element in (x, y, z)])
        return _relative(self.kernel.hs_norm(op_sum) + abs(lam_sum), float(scale))

    def _sigma_cocycle(self, sample: Sampler) -> float:
        a, b = sample.symplectic().to_block(), sample.symplectic().to_block()
        sigma = self.coadjoint_orbit.sigma_cocycle

        product = self.polarized_space.multiply(a, b)
        twisted = a.to_array() @ sigma(b).to_array() @ self.polarized_space.inverse(a).to_array()
        residual = self.kernel.hs_norm(sigma(product).to_array() - twisted - sigma(a).to_array())

        return _relative(residual, self.kernel.hs_norm(sigma(product).to_array()))

    def _composition(self, sample: Sampler) -> float:
        first = self.coadjoint_orbit.lift(sample.symplectic())
        second = self.coadjoint_orbit.lift(sample.symplectic())
        m = self.coadjoint_orbit.random_predual(sample.n, sample.gamma(), sample.scale, sample.rng)
        return self.coadjoint_orbit.composition_residual(first, second, m, self.composition_order)

    def _duality(self, sample: Sampler) -> float:
        group_element = self.coadjoint_orbit.lift(sample.symplectic())
        m = self.coadjoint_orbit.random_predual(sample.n, sample.gamma(), sample.scale, sample.rng)
        x = ExtendedAlgebraElement(op=sample.block(), lam=complex(*sample.rng.standard_normal(2)))

        moved_m = self.coadjoint_orbit.coadjoint(group_element, m)
        moved_x = self.coadjoint_orbit.extended_adjoint(group_element, x)

        lhs = self.polarized_space.pairing(moved_m.mu, moved_m.gamma, x.op, x.lam)
        rhs = self.polarized_space.pairing(m.mu, m.gamma, moved_x.op, moved_x.lam)

        return _relative(abs(lhs - rhs), abs(lhs))

    def _ad_star_derivative(self, sample: Sampler) -> float:
        a = sample.sp_algebra()
        m = self.coadjoint_orbit.random_predual(sample.n, sample.gamma(), sample.scale, sample.rng)
        step = self.settings.tolerances.fd_step

        forward = self.coadjoint_orbit.coadjoint(BlockOperator.from_array(self.kernel.mat_exp(step * a.to_array())), m)
        backward = self.coadjoint_orbit.coadjoint(BlockOperator.from_array(self.kernel.mat_exp(-step * a.to_array())), m)
        difference = (forward.mu.to_array() - backward.mu.to_array()) / (2 * step)

        derivative = self.coadjoint_orbit.ad_star(ExtendedAlgebraElement(op=a.to_block(), lam=1j), m)
        residual = self.kernel.hs_norm(difference - derivative.mu.to_array()) + abs(complex(derivative.gamma))

        return _relative(residual, self.kernel.hs_norm(derivative.mu.to_array()))

    def _kks_reality(self, sample: Sampler) -> float:
        a, b = sample.sp_algebra(), sample.sp_algebra()
        value = self.coadjoint_orbit.kks_value(a, b, self.settings.gamma)
        return _relative(abs(value.imag), abs(value))

    def _isotropy_fixed(self, sample: Sampler) -> float:
        return self.coadjoint_orbit.displacement(sample.isotropy(), self.settings.gamma)

    def _non_isotropy_moves(self, sample: Sampler) -> float:
        tolerance = self.settings.tolerances.displacement
        a = sample.symplectic()

        # block-diagonal draws lie in the isotropy group
        if self.kernel.hs_norm(a.h) <= tolerance:
            return 0.0

        displacement = self.coadjoint_orbit.displacement(a, self.settings.gamma)
        return max(0.0, tolerance - displacement)

    def _orbit_consistency(self, sample: Sampler) -> float:
        a, b = sample.symplectic(), sample.symplectic()
        gamma = self.settings.gamma

        moved = self.coadjoint_orbit.coadjoint(self.coadjoint_orbit.lift(b), self.coadjoint_orbit.orbit_point(a, gamma))
        b_inverse = self.symplectic_group.symplectic_inverse(b)
        expected = self.coadjoint_orbit.orbit_point(self.symplectic_group.compose(b_inverse, a), gamma)

        recovered = self.coadjoint_orbit.orbit_to_disc(moved).z
        expected_point = self.siegel_disc.mobius_act(b_inverse, self.siegel_disc.coset_to_disc(a)).z

        return max(self.coadjoint_orbit.predual_distance(moved, expected), self.kernel.hs_norm(recovered - expected_point))

    def _lambda_independence(self, sample: Sampler) -> float:
        group_element = self.coadjoint_orbit.lift(sample.symplectic())
        op = sample.block()
        m = self.coadjoint_orbit.random_predual(sample.n, sample.gamma(), sample.scale, sample.rng)
        first, second = ExtendedAlgebraElement(op=op, lam=0j), ExtendedAlgebraElement(op=op, lam=3 - 2j)

        adjoint_first = self.coadjoint_orbit.extended_adjoint(group_element, first)
        adjoint_second = self.coadjoint_orbit.extended_adjoint(group_element, second)
        shift_first = complex(adjoint_first.lam) - complex(first.lam)
        shift_second = complex(adjoint_second.lam) - complex(second.lam)

        star_first = self.coadjoint_orbit.ad_star(first, m)
        star_second = self.coadjoint_orbit.ad_star(second, m)

        residual = (
            self.kernel.hs_norm(adjoint_first.op.to_array() - adjoint_second.op.to_array())
            + abs(shift_first - shift_second)
            + self.coadjoint_orbit.predual_distance(star_first, star_second)
        )
        return _relative(residual, abs(shift_first))

    def _affine_composition(self, sample: Sampler) -> float:
        a, b = sample.invertible(), sample.invertible()
        gamma = sample.gamma()
        mu = sample.predual(gamma)
        act = self.coadjoint_orbit.affine_action

        combined = act(self.polarized_space.multiply(a, b), mu, gamma).to_array()
        sequential = act(a, act(b, mu, gamma), gamma).to_array()

        return _relative(self.kernel.hs_norm(combined - sequential), self.kernel.hs_norm(combined))

    def _coset_invariance(self, sample: Sampler) -> float:
        a, u = sample.symplectic(), sample.isotropy()
        gamma = self.settings.gamma

        base = self.coadjoint_orbit.orbit_point(a, gamma)
        shifted = self.coadjoint_orbit.orbit_point(self.symplectic_group.compose(a, u), gamma)

        return _relative(self.coadjoint_orbit.predual_distance(base, shifted), self.kernel.hs_norm(base.mu.to_array()))

    def _orbit_round_trip(self, sample: Sampler) -> float:
        a, point = sample.symplectic(), sample.disc_point()
        gamma = self.settings.gamma

        recovered = self.coadjoint_orbit.orbit_to_disc(self.coadjoint_orbit.orbit_point(a, gamma)).z
        via_disc = self.coadjoint_orbit.orbit_to_disc(self.coadjoint_orbit.disc_to_orbit(point, gamma)).z

        return max(
            self.kernel.hs_norm(recovered - self.siegel_disc.coset_to_disc(a).z),
            self.kernel.hs_norm(via_disc - point.z)
        )

    def _pullback_equals_kks(self, sample: Sampler) -> float:
        a, b = sample.sp_algebra(), sample.sp_algebra()
        gamma = self.settings.gamma
        kks = self.coadjoint_orbit.kks_form(a, b, gamma)
        return _relative(abs(self.coadjoint_orbit.pullback_form(a, b, gamma) - kks), abs(kks))

    def _symplectomorphism(self, sample: Sampler) -> float:
        check = self.coadjoint_orbit.symplecto_check(sample.sp_algebra(), sample.sp_algebra(), self.settings.gamma)

        if check.inconclusive:
            return 0.0

        return _relative(check.residual, abs(check.omega_hat))

    def _gamma_scaling(self, sample: Sampler) -> float:
        a, b = sample.sp_algebra(), sample.sp_algebra()
        gamma = self.settings.gamma
        residuals = []

        for form in (self.coadjoint_orbit.pullback_form, self.coadjoint_orbit.kks_form):
            single, doubled = form(a, b, gamma), form(a, b, 2 * gamma)
            residuals.append(abs(doubled - 2 * single) / max(abs(doubled), np.finfo(float).tiny))

        return max(residuals)

    def _proportionality(self, sample: Sampler) -> float:
        gamma = sample.gamma()
        derived = self.coadjoint_orbit.derive_proportionality_constant(gamma)
        return abs(derived - (-4.0 * gamma)) / abs(gamma)
