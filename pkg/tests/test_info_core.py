"""
Tests for src/info_core/: entropies, thermal states and state plumbing.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.common.errors import DomainError, InvariantError, ShapeError
from src.common.seeding import stream
from src.info_core.engines import clausius_entropy_production, engine_efficiency
from src.info_core.entropy import (
    LN2,
    bits,
    conditional_entropy,
    information_content,
    mutual_information_classical,
    mutual_information_identities,
    mutual_information_quantum,
    nats,
    observational_entropy,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from src.info_core.states import (
    bell_state,
    check_unitary,
    cnot,
    evolve,
    partial_trace,
    random_density_matrix,
    random_joint,
    random_unitary,
    record_which_side,
    swap,
    tensor,
)
from src.info_core.thermal import (
    average_energy,
    free_energy,
    free_energy_gap,
    gibbs_state,
    heat_work_split,
    isothermal_work,
    log_partition,
    noneq_free_energy,
    partition_function,
    thermal_entropy,
)
from src.info_core.types import (
    CoarseGraining,
    DensityMatrix,
    InverseTemperature,
    JointDist,
    ProbDist,
    SpectrumModel,
)

H_01 = -0.1 * math.log(0.1) - 0.9 * math.log(0.9)
BSC_TABLE = np.array([[0.45, 0.05], [0.05, 0.45]])

seeds = st.integers(min_value=0, max_value=2**32)
dims = st.integers(min_value=2, max_value=4)


class TestTypes:
    """Invariants enforced on construction."""

    def test_prob_dist_rejects_bad_weights(self) -> None:
        """Negative or unnormalised weights are invariant violations."""
        with pytest.raises(InvariantError):
            ProbDist([0.5, 0.6])
        with pytest.raises(InvariantError):
            ProbDist([1.5, -0.5])
        with pytest.raises(DomainError):
            ProbDist.normalized([0.0, 0.0])

    def test_density_matrix_invariants(self) -> None:
        """Non-Hermitian, non-unit-trace and non-square inputs are rejected."""
        with pytest.raises(InvariantError):
            DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
        with pytest.raises(InvariantError):
            DensityMatrix(np.eye(2))
        with pytest.raises(ShapeError):
            DensityMatrix(np.ones((2, 3)) / 6)

    def test_density_matrix_is_read_only(self) -> None:
        """Stored entries cannot be mutated."""
        rho = DensityMatrix.maximally_mixed(2)

        with pytest.raises(ValueError):
            rho.entries[0, 0] = 1.0

    def test_density_matrix_json(self) -> None:
        """JSON form is dim plus row-major [re, im] pairs."""
        rho = DensityMatrix.pure(np.array([1.0, 1.0j]))

        payload = rho.to_json()

        assert payload["dim"] == 2
        assert payload["entries"][0][1] == pytest.approx([0.0, -0.5])
        np.testing.assert_allclose(DensityMatrix.from_json(payload).entries, rho.entries)

    def test_spectrum_sorted_with_degeneracies(self) -> None:
        """Levels are sorted, degeneracies follow and count toward the dimension."""
        spec = SpectrumModel([2.0, 0.0], [1, 3])

        np.testing.assert_array_equal(spec.levels, [0.0, 2.0])
        np.testing.assert_array_equal(spec.degeneracies, [3, 1])
        assert spec.dim == 4

    def test_empty_spectrum(self) -> None:
        """An empty spectrum is a domain error."""
        with pytest.raises(DomainError):
            SpectrumModel([])

    def test_inverse_temperature(self) -> None:
        """Zero temperature maps to beta = inf; beta must be positive."""
        assert InverseTemperature.from_temperature(0.0).beta == math.inf
        assert InverseTemperature(2.0).temperature == 0.5
        with pytest.raises(DomainError):
            InverseTemperature(0.0)

    def test_coarse_graining_must_be_complete(self) -> None:
        """Projectors that miss part of the space are rejected."""
        with pytest.raises(InvariantError):
            CoarseGraining((np.diag([1.0, 0.0]),))
        np.testing.assert_array_equal(CoarseGraining.computational(3).volumes, [1.0, 1.0, 1.0])


class TestClassicalEntropy:
    """Surprisal, Shannon, conditional entropy and mutual information."""

    @pytest.mark.parametrize(
        ("p", "expected"),
        [(1.0, 0.0), (0.5, LN2), (0.1, 2.302585092994046)],
    )
    def test_information_content(self, p: float, expected: float) -> None:
        """Surprisal -ln p."""
        assert information_content(p) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("p", [0.0, -0.1, 1.5])
    def test_information_content_domain(self, p: float) -> None:
        """p outside (0, 1] is a domain error."""
        with pytest.raises(DomainError):
            information_content(p)

    @pytest.mark.parametrize(
        ("weights", "expected"),
        [([1.0, 0.0], 0.0), ([0.5, 0.5], LN2), ([0.25, 0.75], 0.5623351446188083)],
    )
    def test_shannon_entropy(self, weights: list[float], expected: float) -> None:
        """-sum p ln p with 0 ln 0 = 0."""
        assert shannon_entropy(ProbDist(weights)) == pytest.approx(expected, abs=1e-14)

    def test_bits_and_nats(self) -> None:
        """One bit is ln 2 nats."""
        assert bits(LN2) == pytest.approx(1.0)
        assert nats(1.0) == pytest.approx(LN2)

    def test_mutual_information_examples(self) -> None:
        """Independent, perfectly correlated and binary symmetric channel tables."""
        independent = JointDist.product(ProbDist([0.3, 0.7]), ProbDist([0.6, 0.4]))
        correlated = JointDist(np.diag([0.5, 0.5]))

        assert mutual_information_classical(independent) == pytest.approx(0.0, abs=1e-14)
        assert mutual_information_classical(correlated) == pytest.approx(LN2)
        assert mutual_information_classical(BSC_TABLE) == pytest.approx(LN2 - H_01, abs=1e-12)
        assert mutual_information_classical(BSC_TABLE) == pytest.approx(0.368064, abs=1e-6)

    def test_conditional_entropy_examples(self) -> None:
        """Deterministic, independent and binary symmetric channel tables."""
        px = ProbDist([0.2, 0.8])

        assert conditional_entropy(np.diag(px.weights)) == pytest.approx(0.0, abs=1e-14)
        assert conditional_entropy(JointDist.product(px, ProbDist([0.5, 0.5]))) == pytest.approx(
            shannon_entropy(px)
        )
        assert conditional_entropy(BSC_TABLE) == pytest.approx(0.325083, abs=1e-6)

    @given(seeds, dims, dims)
    @settings(max_examples=60, deadline=None)
    def test_mutual_information_identities_agree(self, seed: int, n_x: int, n_y: int) -> None:
        """The three textbook expressions agree and match the direct sum."""
        table = random_joint(n_x, n_y, stream(seed))

        a, b, c = mutual_information_identities(table)
        direct = mutual_information_classical(table)

        assert a == pytest.approx(direct, abs=1e-10)
        assert b == pytest.approx(direct, abs=1e-10)
        assert c == pytest.approx(direct, abs=1e-10)
        assert mutual_information_classical(table.transpose()) == pytest.approx(direct, abs=1e-12)
        assert direct >= -1e-12


class TestQuantumEntropy:
    """Von Neumann, relative entropy, quantum mutual information."""

    def test_von_neumann_examples(self) -> None:
        """Pure, maximally mixed and a rotated (0.25, 0.75) state."""
        u = random_unitary(2, stream(1))
        rotated = evolve(DensityMatrix.diagonal([0.25, 0.75]), u)

        assert von_neumann_entropy(DensityMatrix.basis(2, 0)) == pytest.approx(0.0, abs=1e-14)
        assert von_neumann_entropy(DensityMatrix.maximally_mixed(5)) == pytest.approx(math.log(5))
        assert von_neumann_entropy(rotated) == pytest.approx(0.5623351446188083, abs=1e-9)

    def test_relative_entropy_examples(self) -> None:
        """Zero on identical states, ln 2 against the mixed qubit, +inf off support."""
        zero = DensityMatrix.basis(2, 0)
        one = DensityMatrix.basis(2, 1)
        mixed = DensityMatrix.maximally_mixed(2)

        assert relative_entropy(mixed, mixed) == pytest.approx(0.0, abs=1e-14)
        assert relative_entropy(zero, mixed) == pytest.approx(LN2)
        assert relative_entropy(zero, one) == math.inf

    def test_mutual_information_quantum_examples(self) -> None:
        """Product state, CNOT record and Bell state."""
        product = tensor(DensityMatrix.diagonal([0.3, 0.7]), DensityMatrix.maximally_mixed(2))

        assert mutual_information_quantum(product, (2, 2)) == pytest.approx(0.0, abs=1e-12)
        assert mutual_information_quantum(record_which_side(0.5), (2, 2)) == pytest.approx(LN2)
        assert mutual_information_quantum(bell_state(), (2, 2)) == pytest.approx(2 * LN2)

    def test_mutual_information_quantum_dims(self) -> None:
        """dims must factor the state dimension."""
        with pytest.raises(ShapeError):
            mutual_information_quantum(bell_state(), (2, 3))

    def test_observational_entropy_examples(self) -> None:
        """Fine, trivial and rotated coarse-grainings."""
        diag = DensityMatrix.diagonal([0.2, 0.3, 0.5])
        plus = DensityMatrix.pure(np.array([1.0, 1.0]))

        assert observational_entropy(diag, CoarseGraining.computational(3)) == pytest.approx(
            shannon_entropy(ProbDist([0.2, 0.3, 0.5]))
        )
        assert observational_entropy(diag, CoarseGraining.trivial(3)) == pytest.approx(math.log(3))
        assert observational_entropy(plus, CoarseGraining.computational(2)) == pytest.approx(LN2)

    @given(seeds, dims)
    @settings(max_examples=40, deadline=None)
    def test_observational_entropy_bounds_von_neumann(self, seed: int, dim: int) -> None:
        """S_obs >= S for any state and coarse-graining."""
        rho = random_density_matrix(dim, stream(seed))

        assert observational_entropy(rho, CoarseGraining.computational(dim)) >= von_neumann_entropy(rho) - 1e-12

    @given(seeds, dims, dims)
    @settings(max_examples=40, deadline=None)
    def test_additivity_and_subadditivity(self, seed: int, d_a: int, d_b: int) -> None:
        """S(A ⊗ B) = S(A) + S(B); S(AB) <= S(A) + S(B) for correlated states."""
        rng = stream(seed)
        a = random_density_matrix(d_a, rng)
        b = random_density_matrix(d_b, rng)
        joint = random_density_matrix(d_a * d_b, rng)

        s_ab = von_neumann_entropy(tensor(a, b))
        s_a = von_neumann_entropy(partial_trace(joint, (d_a, d_b), keep=0))
        s_b = von_neumann_entropy(partial_trace(joint, (d_a, d_b), keep=1))

        assert s_ab == pytest.approx(von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-9)
        assert von_neumann_entropy(joint) <= s_a + s_b + 1e-9

    @given(seeds, dims)
    @settings(max_examples=40, deadline=None)
    def test_unitary_invariance(self, seed: int, dim: int) -> None:
        """S(U rho U^dagger) = S(rho)."""
        rng = stream(seed)
        rho = random_density_matrix(dim, rng)

        assert von_neumann_entropy(evolve(rho, random_unitary(dim, rng))) == pytest.approx(
            von_neumann_entropy(rho), abs=1e-9
        )

    @given(seeds, dims)
    @settings(max_examples=40, deadline=None)
    def test_klein_inequality(self, seed: int, dim: int) -> None:
        """Relative entropy is non-negative and vanishes on equal states."""
        rng = stream(seed)
        sigma = random_density_matrix(dim, rng)
        rho = random_density_matrix(dim, rng)

        assert relative_entropy(sigma, rho) >= -1e-12
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-9)


class TestThermal:
    """Gibbs states, partition functions and free energies."""

    def test_qubit_gibbs_populations(self) -> None:
        """(1, e^{-beta E}) / Z."""
        p = gibbs_state(SpectrumModel.qubit(1.0), 2.0)
        z = 1.0 + math.exp(-2.0)

        assert isinstance(p, ProbDist)
        np.testing.assert_allclose(p.weights, [1.0 / z, math.exp(-2.0) / z])

    def test_high_temperature_is_maximally_mixed(self) -> None:
        """beta -> 0 gives the uniform state; a degenerate spectrum is uniform at any beta."""
        hot = gibbs_state(SpectrumModel([0.0, 1.0, 3.0]), 1e-12)
        flat = gibbs_state(SpectrumModel([1.0], [4]), 5.0)

        np.testing.assert_allclose(hot.weights, np.full(3, 1 / 3), atol=1e-10)
        np.testing.assert_allclose(flat.weights, np.full(4, 0.25))

    def test_matrix_hamiltonian_gives_density_matrix(self) -> None:
        """A Hermitian matrix Hamiltonian returns the Gibbs density matrix."""
        h = np.array([[0.0, 0.5], [0.5, 1.0]])

        gamma = gibbs_state(h, 1.0)

        assert isinstance(gamma, DensityMatrix)
        assert noneq_free_energy(gamma, h, 1.0) == pytest.approx(-log_partition(np.linalg.eigvalsh(h), 1.0))

    def test_partition_examples(self) -> None:
        """Single level and qubit at beta E = 1."""
        assert partition_function(SpectrumModel([2.0]), 0.5) == pytest.approx(math.exp(-1.0))
        assert average_energy(SpectrumModel([2.0]), 0.5) == pytest.approx(2.0)
        expected = math.exp(-1.0) / (1.0 + math.exp(-1.0))
        assert average_energy(SpectrumModel.qubit(1.0), 1.0) == pytest.approx(expected)

    def test_harmonic_ladder_closed_form(self) -> None:
        """Truncated ladder matches -beta omega / 2 - ln(1 - e^{-beta omega})."""
        closed = -0.5 - math.log(1.0 - math.exp(-1.0))

        assert log_partition(SpectrumModel.harmonic(1.0, 201), 1.0) == pytest.approx(closed, abs=1e-10)

    def test_thermal_entropy_examples(self) -> None:
        """Qubit limits and beta E = 1."""
        qubit = SpectrumModel.qubit(1.0)

        assert thermal_entropy(qubit, math.inf) == 0.0
        assert thermal_entropy(qubit, 1e-9) == pytest.approx(LN2, abs=1e-8)
        assert thermal_entropy(qubit, 1.0) == pytest.approx(0.582203, abs=1e-6)

    def test_ground_state_limit(self) -> None:
        """beta = inf gives ground populations and the ground energy as F."""
        spec = SpectrumModel([0.5, 0.5, 2.0])

        np.testing.assert_allclose(gibbs_state(spec, math.inf).weights, [0.5, 0.5, 0.0])
        assert free_energy(spec, math.inf) == 0.5

    def test_energy_is_minus_dlnz_dbeta(self) -> None:
        """Central finite difference with step 1e-5."""
        spec = SpectrumModel([0.0, 0.3, 1.1, 2.5], [1, 2, 1, 3])
        beta, h = 0.8, 1e-5

        derivative = (log_partition(spec, beta + h) - log_partition(spec, beta - h)) / (2 * h)

        assert average_energy(spec, beta) == pytest.approx(-derivative, rel=1e-6)

    def test_noneq_free_energy_examples(self) -> None:
        """Gibbs state, excited state and the maximally mixed qubit."""
        qubit = SpectrumModel.qubit(1.0)
        gamma = DensityMatrix.diagonal(gibbs_state(qubit, 1.0))

        assert noneq_free_energy(gamma, qubit, 1.0) == pytest.approx(free_energy(qubit, 1.0))
        assert noneq_free_energy(DensityMatrix.basis(2, 1), qubit, 1.0) == pytest.approx(1.0)
        assert noneq_free_energy(DensityMatrix.maximally_mixed(2), qubit, 1.0) == pytest.approx(0.5 - LN2)

    @given(seeds)
    @settings(max_examples=40, deadline=None)
    def test_gibbs_minimises_free_energy(self, seed: int) -> None:
        """F(rho) = [S(rho||gamma) - ln Z]/beta >= F(gamma)."""
        rng = stream(seed)
        spec = SpectrumModel(rng.uniform(0.0, 2.0, size=3))
        rho = random_density_matrix(3, rng)
        beta = 1.3

        f_rho = noneq_free_energy(rho, spec, beta)

        assert f_rho >= free_energy(spec, beta) - 1e-12
        assert f_rho == pytest.approx(free_energy(spec, beta) + free_energy_gap(rho, spec, beta), abs=1e-9)

    def test_isothermal_work_is_free_energy_difference(self) -> None:
        """Quasistatic work between two gaps equals Delta F."""
        levels = SpectrumModel.qubit

        work = isothermal_work(levels, 1.0, 0.0, 3.0)

        assert work == pytest.approx(free_energy(levels(3.0), 1.0) - free_energy(levels(0.0), 1.0))

    def test_heat_work_split_closes_first_law(self) -> None:
        """Work plus heat equals the energy change."""
        split = heat_work_split(
            (np.array([0.5, 0.5]), np.array([0.8, 0.2])),
            (np.array([0.0, 1.0]), np.array([0.0, 2.0])),
        )

        assert split.work + split.heat == pytest.approx(split.energy_change)


class TestStatePlumbing:
    """Tensor, partial trace, evolution and named gates."""

    def test_evolve_by_identity(self) -> None:
        """Identity evolution leaves the state unchanged."""
        rho = random_density_matrix(3, stream(5))

        np.testing.assert_allclose(evolve(rho, np.eye(3)).entries, rho.entries, atol=1e-14)

    def test_cnot_records_which_side(self) -> None:
        """CNOT copies the side into the blank memory."""
        recorded = record_which_side(0.5)

        np.testing.assert_allclose(np.diag(recorded.entries).real, [0.5, 0.0, 0.0, 0.5], atol=1e-14)

    def test_bell_marginal_is_maximally_mixed(self) -> None:
        """Either half of a Bell pair is maximally mixed."""
        for keep in (0, 1):
            np.testing.assert_allclose(
                partial_trace(bell_state(), (2, 2), keep=keep).entries, np.eye(2) / 2, atol=1e-14
            )

    def test_partial_trace_recovers_factors(self) -> None:
        """Tracing a product state returns each factor."""
        rng = stream(8)
        a = random_density_matrix(2, rng)
        b = random_density_matrix(3, rng)
        ab = tensor(a, b)

        np.testing.assert_allclose(partial_trace(ab, (2, 3), keep=0).entries, a.entries, atol=1e-12)
        np.testing.assert_allclose(partial_trace(ab, (2, 3), keep=1).entries, b.entries, atol=1e-12)

    def test_swap_exchanges_factors(self) -> None:
        """SWAP maps a ⊗ b to b ⊗ a."""
        a = DensityMatrix.diagonal([0.9, 0.1])
        b = DensityMatrix.diagonal([0.3, 0.7])

        np.testing.assert_allclose(evolve(tensor(a, b), swap(2)).entries, tensor(b, a).entries, atol=1e-14)

    def test_non_unitary_rejected(self) -> None:
        """Evolution checks unitarity within 1e-10."""
        with pytest.raises(InvariantError):
            check_unitary(np.array([[1.0, 0.0], [0.0, 1.1]]))
        with pytest.raises(ShapeError):
            evolve(DensityMatrix.maximally_mixed(2), cnot())


class TestEngines:
    """Efficiency and Clausius bookkeeping."""

    def test_reversible_engine_reaches_carnot(self) -> None:
        """Carnot heat ratio gives eta = eta_C and zero entropy production."""
        report = engine_efficiency(1.0, -0.25, 4.0, 1.0)

        assert report.eta == pytest.approx(report.carnot)
        assert report.sigma_dot == pytest.approx(0.0, abs=1e-15)
        assert not report.violates_second_law

    def test_irreversible_engine(self) -> None:
        """T_h = 2, T_c = 1, Q_h = -1, Q_c = 0.6."""
        report = engine_efficiency(-1.0, 0.6, 2.0, 1.0)

        assert report.eta == pytest.approx(0.4)
        assert report.sigma_dot == pytest.approx(0.1)
        assert report.identity_residual < 1e-12

    def test_equal_temperatures(self) -> None:
        """All hot heat returned to an equally hot bath gives zero efficiency."""
        assert engine_efficiency(1.0, -1.0, 1.0, 1.0).eta == pytest.approx(0.0)

    def test_zero_hot_current(self) -> None:
        """Efficiency is undefined without hot heat; a domain error, not a bare ZeroDivisionError."""
        with pytest.raises(DomainError, match="zero hot heat current"):
            engine_efficiency(0.0, 0.1, 2.0, 1.0)

    def test_second_law_violation_flagged(self) -> None:
        """Negative entropy production is flagged."""
        report = engine_efficiency(1.0, 0.0, 2.0, 1.0)

        assert report.violates_second_law is False
        assert engine_efficiency(1.0, -0.9, 2.0, 1.0).violates_second_law

    def test_clausius(self) -> None:
        """A reversible two-bath cycle has zero entropy production."""
        report = clausius_entropy_production([2.0, -1.0], [2.0, 1.0])

        assert report.entropy_production == pytest.approx(0.0)
        assert not report.violates_second_law
        with pytest.raises(DomainError):
            clausius_entropy_production([1.0], [0.0])
