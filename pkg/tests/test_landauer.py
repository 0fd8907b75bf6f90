"""
Tests for src/landauer/: the heat equality, its refinements and the SEMW chain.
"""

import math

import numpy as np
import pytest
from pyspark.sql import SparkSession

from src.common.errors import ContractError, DomainError, InvariantError, ShapeError, UnreachableEntropyError
from src.common.seeding import stream
from src.info_core.entropy import LN2, von_neumann_entropy
from src.info_core.states import random_density_matrix, random_unitary, swap
from src.info_core.thermal import gibbs_state
from src.info_core.types import DensityMatrix, SpectrumModel
from src.landauer.bounds import (
    PLANCKIAN_A,
    AlphaModel,
    HeatCapacityModel,
    distillation_erasure_cost,
    finite_size_bounds,
    finite_time_bound,
    phonon_bit_erasure_heat,
    single_shot_battery_bound,
    surprisal_stats,
    zero_temperature_bound,
)
from src.landauer.erasure import (
    MAX_BATH_DIM,
    ErasureSetup,
    landauer_minimum,
    reeb_wolf_sweep,
    run_erasure,
    swap_erasure_cost,
    swap_setup,
)
from src.landauer.ledger import ROW_COLUMNS, Ledger
from src.landauer.semw import SEMWState, random_semw_setup, semw_cycle_check, semw_sweep


class TestLedger:
    """Ledger invariants and serialisation."""

    def test_zero_ledger(self) -> None:
        """A process that does nothing books nothing."""
        ledger = Ledger.zero(1.0)

        assert ledger.residual == 0.0
        assert ledger.landauer_margin == 0.0

    def test_negative_mutual_information_rejected(self) -> None:
        """I below -1e-10 is an invariant violation."""
        with pytest.raises(InvariantError):
            Ledger(0.0, 0.0, 0.0, -1e-6, 0.0, 0.0, 1.0)

    def test_entropy_production_must_match(self) -> None:
        """Sigma has to equal beta dQ_B + dS_S."""
        with pytest.raises(InvariantError):
            Ledger(-LN2, 0.0, LN2, 0.0, 0.0, 0.5, 1.0)

    def test_row_columns(self) -> None:
        """CSV rows carry the documented columns in order."""
        assert tuple(Ledger.zero(2.0).as_row()) == ROW_COLUMNS
        assert Ledger.zero(2.0).to_json()["beta"] == 2.0


class TestRunErasure:
    """Exact system–bath processes."""

    def test_identity_books_nothing(self) -> None:
        """U = 1 leaves every ledger entry at zero."""
        setup = ErasureSetup(DensityMatrix.maximally_mixed(2), SpectrumModel.qubit(1.0).matrix(), 1.0, np.eye(4))

        ledger = run_erasure(setup)

        for value in ledger.as_row().values():
            assert value == pytest.approx(0.0, abs=1e-12)

    def test_single_swap(self) -> None:
        """Swapping a mixed qubit into a bath qubit at beta E = 1 costs the closed-form heat."""
        ledger = run_erasure(swap_setup(1.0, 1.0))

        assert ledger.heat_to_bath == pytest.approx(swap_erasure_cost(1.0, 1.0), abs=1e-12)
        assert ledger.heat_to_bath == pytest.approx(0.231059, abs=1e-6)
        assert ledger.residual < 1e-10
        assert ledger.mutual_info == pytest.approx(0.0, abs=1e-12)

    def test_random_unitaries_on_two_qubits(self) -> None:
        """The heat equality holds for 200 random qubit ⊗ qubit processes."""
        rng = stream(21)
        for _ in range(200):
            setup = ErasureSetup(
                random_density_matrix(2, rng),
                SpectrumModel.qubit(float(rng.uniform(0.1, 3.0))).matrix(),
                float(rng.uniform(0.1, 10.0)),
                random_unitary(4, rng),
            )
            ledger = run_erasure(setup)

            assert ledger.residual < 1e-9
            assert ledger.landauer_margin >= -1e-9

    def test_non_unitary_rejected(self) -> None:
        """The joint map must be unitary."""
        with pytest.raises(InvariantError):
            ErasureSetup(DensityMatrix.maximally_mixed(2), np.diag([0.0, 1.0]), 1.0, 2.0 * np.eye(4))

    def test_dimension_mismatch(self) -> None:
        """Unitary size must match the composite."""
        with pytest.raises(ShapeError):
            ErasureSetup(DensityMatrix.maximally_mixed(2), np.diag([0.0, 1.0, 2.0]), 1.0, np.eye(4))

    def test_bath_dimension_cap(self) -> None:
        """Exact diagonalisation refuses baths above the cap."""
        big = np.diag(np.arange(MAX_BATH_DIM + 1, dtype=float))
        with pytest.raises(DomainError):
            ErasureSetup(DensityMatrix.maximally_mixed(2), big, 1.0, np.eye(2 * (MAX_BATH_DIM + 1)))


class TestClosedForms:
    """Single-swap cost and the Landauer minimum."""

    def test_swap_cost_limits(self) -> None:
        """Zero gap costs nothing; a cold bath costs E/2."""
        assert swap_erasure_cost(0.0, 1.0) == 0.0
        assert swap_erasure_cost(2.0, math.inf) == 1.0
        assert swap_erasure_cost(1.0, 1.0) == pytest.approx(0.5 - 1.0 / (1.0 + math.e))

    def test_swap_cost_increases_with_gap(self) -> None:
        """W(E) is increasing and unbounded."""
        costs = [swap_erasure_cost(e, 1.0) for e in (0.5, 1.0, 2.0, 10.0, 100.0)]

        assert costs == sorted(costs)
        assert costs[-1] > 40.0

    @pytest.mark.parametrize(
        ("delta_s", "beta", "expected"),
        [(-LN2, 1.0, LN2), (0.0, 1.0, 0.0), (-math.log(4.0), 2.0, math.log(4.0) / 2.0)],
    )
    def test_landauer_minimum(self, delta_s: float, beta: float, expected: float) -> None:
        """-dS_S / beta."""
        assert landauer_minimum(delta_s, beta) == pytest.approx(expected, abs=1e-15)


class TestReebWolfSweep:
    """Random-process sweeps."""

    def test_sweep_residuals(self) -> None:
        """Every ledger closes and respects the Landauer bound."""
        result = reeb_wolf_sweep(60, seed=3)

        assert len(result.ledgers) == 60
        assert result.max_residual < 1e-9
        assert result.min_landauer_margin >= -1e-9
        assert set(result.dims) == {(2, 2), (2, 3)}

    def test_sweep_is_reproducible(self) -> None:
        """Same seed, same ledgers."""
        a = reeb_wolf_sweep(10, seed=9)
        b = reeb_wolf_sweep(10, seed=9)

        assert [x.heat_to_bath for x in a.ledgers] == [y.heat_to_bath for y in b.ledgers]

    def test_parallel_matches_serial(self, spark: SparkSession) -> None:
        """Trial i is the same on one thread or on the Spark pool."""
        serial = reeb_wolf_sweep(8, seed=4, threads=1)
        parallel = reeb_wolf_sweep(8, seed=4, threads=2)

        assert [x.heat_to_bath for x in serial.ledgers] == [y.heat_to_bath for y in parallel.ledgers]

    def test_invalid_arguments(self) -> None:
        """No trials or an inverted beta range are domain errors."""
        with pytest.raises(DomainError):
            reeb_wolf_sweep(0)
        with pytest.raises(DomainError):
            reeb_wolf_sweep(5, beta_range=(2.0, 1.0))


class TestZeroTemperatureBound:
    """Finite-capacity bath bound."""

    def test_no_entropy_no_heat(self) -> None:
        """dS = 0 leaves the bath where it was."""
        bound = zero_temperature_bound(HeatCapacityModel.phonon(1.0), 0.0)

        assert bound.heat == 0.0
        assert bound.bath_temperature_after == 0.0

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_phonon_bit(self, a: float) -> None:
        """One bit into a T = 0 phonon bath matches the closed form."""
        bound = zero_temperature_bound(HeatCapacityModel.phonon(a), LN2)

        assert bound.heat == pytest.approx(phonon_bit_erasure_heat(a), rel=1e-8)
        assert bound.relative_gap < 1e-8

    @pytest.mark.parametrize("delta_s", [0.1, 1.0, 3.0])
    def test_general_entropy(self, delta_s: float) -> None:
        """(3^{4/3}/4) dS^{4/3} a^{-1/3} for any dS."""
        expected = 3.0 ** (4.0 / 3.0) / 4.0 * delta_s ** (4.0 / 3.0) * 2.0 ** (-1.0 / 3.0)

        assert zero_temperature_bound(HeatCapacityModel.phonon(2.0), delta_s).heat == pytest.approx(
            expected, rel=1e-8
        )

    def test_small_entropy_at_finite_temperature(self) -> None:
        """As dS -> 0 the bound approaches T dS, the Landauer minimum."""
        t = 1.0
        delta_s = 1e-3

        heat = zero_temperature_bound(HeatCapacityModel.phonon(1.0, temperature=t), delta_s).heat

        assert heat == pytest.approx(landauer_minimum(-delta_s, 1.0 / t), rel=0.02)
        assert heat >= landauer_minimum(-delta_s, 1.0 / t)

    def test_unreachable_entropy(self) -> None:
        """A tiny capacity cannot absorb a bit below the bracket limit."""
        with pytest.raises(UnreachableEntropyError):
            zero_temperature_bound(HeatCapacityModel.phonon(1e-40), 1.0)

    def test_invalid_models(self) -> None:
        """Non-positive coefficients and constant capacity from T = 0 are rejected."""
        with pytest.raises(DomainError):
            HeatCapacityModel(0.0, 3.0)
        with pytest.raises(DomainError):
            HeatCapacityModel(1.0, 0.0)


class TestFiniteTimeAndSize:
    """Finite-time and finite-size corrections."""

    def test_finite_time_examples(self) -> None:
        """Explicit alpha, Planckian alpha and the slow limit."""
        assert finite_time_bound(10.0, 1.0, "explicit", 1.0) == pytest.approx(LN2 + 0.1)
        assert finite_time_bound(100.0, 1.0, AlphaModel.PLANCKIAN) == pytest.approx(LN2 + 0.0257946)
        assert finite_time_bound(math.inf, 2.0, "explicit", 5.0) == pytest.approx(LN2 / 2.0)

    def test_planckian_alpha_is_temperature_independent(self) -> None:
        """alpha = a for any beta."""
        excess = finite_time_bound(10.0, 4.0, "planckian") - LN2 / 4.0

        assert excess == pytest.approx(PLANCKIAN_A / 10.0)

    def test_finite_time_domain(self) -> None:
        """tau must be positive; explicit mode needs alpha."""
        with pytest.raises(DomainError):
            finite_time_bound(0.0, 1.0, "explicit", 1.0)
        with pytest.raises(DomainError):
            finite_time_bound(1.0, 1.0, "explicit")

    def test_finite_size_examples(self) -> None:
        """dS = 0 gives zero floors; a qubit with n = 10 gives (0.1, ln^2 2 / 2)."""
        zero = finite_size_bounds(0.0, 2, 10)
        qubit = finite_size_bounds(LN2, 2, 10)

        assert (zero.noninteracting, zero.universal) == (0.0, 0.0)
        assert qubit.noninteracting == pytest.approx(0.1)
        assert qubit.universal == pytest.approx(0.24023, abs=1e-5)
        assert qubit.interacting_reference == pytest.approx(2.0 * (math.pi / 10) ** 2)

    def test_qubit_discrepancy_is_flagged(self) -> None:
        """The quoted 1/(3n) figure is reported next to the formula value."""
        bounds = finite_size_bounds(LN2, 2, 30)

        assert bounds.qubit_discrepancy
        assert bounds.quoted_qubit == pytest.approx(1.0 / 90.0)
        assert not finite_size_bounds(0.3, 3, 30).qubit_discrepancy

    def test_finite_size_scaling(self) -> None:
        """Noninteracting floor scales as 1/n; the universal one does not depend on n."""
        small = finite_size_bounds(0.5, 3, 10)
        large = finite_size_bounds(0.5, 3, 1000)

        assert small.noninteracting / large.noninteracting == pytest.approx(100.0)
        assert small.universal == large.universal

    def test_finite_size_domain(self) -> None:
        """d >= 2 and n >= 1."""
        with pytest.raises(DomainError):
            finite_size_bounds(LN2, 1, 10)
        with pytest.raises(DomainError):
            finite_size_bounds(LN2, 2, 0)


class TestSingleShotAndDistillation:
    """Battery size and N-copy erasure cost."""

    def test_battery_examples(self) -> None:
        """Maximally mixed qubit needs one bit; a pure state none."""
        assert single_shot_battery_bound(DensityMatrix.maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)
        assert single_shot_battery_bound(DensityMatrix.basis(3, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_surprisal_of_biased_bit(self) -> None:
        """S = H(0.1) nats; variance from the spectral sums."""
        stats = surprisal_stats(DensityMatrix.diagonal([0.9, 0.1]))
        log2 = np.log2([0.9, 0.1])
        variance = float(np.dot([0.9, 0.1], log2**2)) - stats.entropy**2

        assert stats.entropy * LN2 == pytest.approx(0.325083, abs=1e-6)
        assert stats.variance == pytest.approx(variance)
        assert stats.variance >= 0.0

    def test_battery_exceeds_entropy(self) -> None:
        """n >= S(rho) in bits for random states."""
        rng = stream(31)
        for _ in range(50):
            rho = random_density_matrix(4, rng)

            assert single_shot_battery_bound(rho) >= von_neumann_entropy(rho) / LN2 - 1e-12

    def test_distillation_examples(self) -> None:
        """epsilon = 0 is Landauer; epsilon = 0.5 doubles one copy's cost."""
        assert distillation_erasure_cost(1, 0.0, 1.0) == pytest.approx(LN2)
        assert distillation_erasure_cost(1, 0.5, 1.0) == pytest.approx(2.0 * LN2)
        assert distillation_erasure_cost(3, 0.0, 2.0) == pytest.approx(3.0 * LN2 / 2.0)

    def test_distillation_per_copy_limit(self) -> None:
        """The epsilon correction vanishes per copy as N grows."""
        n = 10**6

        assert distillation_erasure_cost(n, 0.3, 1.0) / n == pytest.approx(LN2, rel=1e-6)

    def test_distillation_domain(self) -> None:
        """epsilon must lie in [0, 1)."""
        with pytest.raises(DomainError):
            distillation_erasure_cost(1, 1.0, 1.0)


def _swap_memory_with_environment(gap: float, beta: float) -> tuple[SEMWState, tuple[np.ndarray, ...], np.ndarray]:
    h = np.diag([0.0, gap]).astype(np.complex128)
    zero = np.zeros((2, 2), dtype=np.complex128)
    gamma = gibbs_state(h, beta)
    assert isinstance(gamma, DensityMatrix)
    initial = SEMWState(DensityMatrix.basis(2, 0), gamma, DensityMatrix.maximally_mixed(2), DensityMatrix.basis(2, 0))
    unitary = np.kron(np.kron(np.eye(2), swap(2)), np.eye(2))
    return initial, (zero, h, h, zero), unitary


class TestSEMW:
    """System–environment–memory–work entropy chain."""

    def test_identity_cycle(self) -> None:
        """Doing nothing gives zero slack."""
        initial, hamiltonians, _ = random_semw_setup(stream(2), beta=1.0)

        ledger = semw_cycle_check(initial, hamiltonians, np.eye(16), 1.0)

        assert ledger.slack == pytest.approx(0.0, abs=1e-12)
        assert ledger.holds

    def test_swap_cycle_matches_erasure_ledger(self) -> None:
        """Resetting the memory by a swap leaves the slack I + S(sigma_B || gamma_B) of the erasure."""
        initial, hamiltonians, unitary = _swap_memory_with_environment(1.0, 1.0)

        ledger = semw_cycle_check(initial, hamiltonians, unitary, 1.0)
        erasure = run_erasure(swap_setup(1.0, 1.0))

        assert ledger.slack == pytest.approx(erasure.slack, abs=1e-9)
        assert ledger.heat_to_environment == pytest.approx(erasure.heat_to_bath, abs=1e-12)

    def test_energy_changing_unitary_breaks_contract(self) -> None:
        """A unitary that does not commute with H_total is reported as the culprit."""
        initial, hamiltonians, _ = random_semw_setup(stream(5), beta=1.0)

        with pytest.raises(ContractError) as info:
            semw_cycle_check(initial, hamiltonians, random_unitary(16, stream(6)), 1.0)
        assert info.value.subsystem == "unitary"

    def test_hot_environment_breaks_contract(self) -> None:
        """The environment must start in its Gibbs state."""
        initial, hamiltonians, unitary = random_semw_setup(stream(7), beta=1.0)

        with pytest.raises(ContractError) as info:
            semw_cycle_check(initial, hamiltonians, unitary, 0.2)
        assert info.value.subsystem == "environment"

    def test_mixed_work_reservoir_breaks_contract(self) -> None:
        """The work reservoir must stay pure."""
        initial, hamiltonians, unitary = random_semw_setup(stream(8), beta=1.0)
        mixed = initial._replace(work=DensityMatrix.maximally_mixed(2))

        with pytest.raises(ContractError) as info:
            semw_cycle_check(mixed, hamiltonians, unitary, 1.0)
        assert info.value.subsystem == "work"

    def test_random_cycles_never_violate(self) -> None:
        """500 random contract-respecting cycles all satisfy dS_M >= -beta Q_E."""
        ledgers = semw_sweep(500, seed=11)

        assert min(ledger.slack for ledger in ledgers) >= -1e-9
        assert all(abs(ledger.delta_s_system) < 1e-8 for ledger in ledgers)
