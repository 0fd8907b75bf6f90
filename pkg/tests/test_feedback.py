"""
Tests for src/feedback/: measurement channels, the feedback work ledger and the
staircase ratchet.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.common.errors import DomainError, InvariantError, ShapeError
from src.common.seeding import stream
from src.feedback.ledger import FeedbackLedger, bennett_ledger, feedback_bound, szilard_cycle_ledger
from src.feedback.measurement import (
    MeasurementModel,
    binary_symmetric_measurement,
    measurement_gain,
    perfect_measurement,
    undershoot_measurement,
    uninformative_measurement,
)
from src.feedback.ratchet import detailed_balance_rates, staircase_ratchet
from src.info_core.entropy import LN2, shannon_entropy
from src.info_core.types import ProbDist

# ln 2 - h(0.1) in nats
BSC_INFORMATION = 0.36806421


def _random_channel(seed: int, n_states: int, n_outcomes: int) -> tuple[MeasurementModel, ProbDist]:
    rng = stream(seed)
    table = rng.dirichlet(np.ones(n_outcomes), size=n_states).T
    return MeasurementModel(table), ProbDist(rng.dirichlet(np.ones(n_states)))


class TestMeasurement:
    """Channels, posteriors and the free energy of a record."""

    def test_binary_symmetric_information(self) -> None:
        """A 10% error channel on a fair bit carries ln 2 - h(0.1) nats."""
        meas = binary_symmetric_measurement(0.1)

        assert meas.mutual_information(ProbDist.uniform(2)) == pytest.approx(BSC_INFORMATION, abs=1e-7)

    def test_gain_scales_with_temperature(self) -> None:
        """The free energy created is T I(X:M)."""
        meas = binary_symmetric_measurement(0.1)
        prior = ProbDist.uniform(2)

        assert measurement_gain(prior, meas, 2.5) == pytest.approx(2.5 * meas.mutual_information(prior))
        with pytest.raises(DomainError):
            measurement_gain(prior, meas, -1.0)

    def test_perfect_and_uninformative_extremes(self) -> None:
        """A perfect reading gains H(X); an uninformative one gains nothing."""
        prior = ProbDist.normalized([1.0, 2.0, 5.0])

        assert perfect_measurement(3).mutual_information(prior) == pytest.approx(shannon_entropy(prior))
        blind = uninformative_measurement(3, ProbDist.normalized([1.0, 1.0]))
        assert measurement_gain(prior, blind, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_coin_flip_channel_is_useless(self) -> None:
        """At 50% error the outcome says nothing about the bit."""
        meas = binary_symmetric_measurement(0.5)

        assert meas.mutual_information(ProbDist.uniform(2)) == pytest.approx(0.0, abs=1e-15)

    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=2, max_value=5))
    @settings(max_examples=50, deadline=None)
    def test_measurement_does_not_disturb(self, seed: int, n: int) -> None:
        """Averaging posteriors over outcomes gives the prior back."""
        meas, prior = _random_channel(seed, n, n + 1)

        assert meas.check_non_disturbance(prior) <= 1e-10
        assert meas.mutual_information(prior) >= -1e-12

    def test_posterior_of_impossible_outcome_is_zero(self) -> None:
        """Outcomes with p_M = 0 get an all-zero posterior column."""
        meas = MeasurementModel(np.array([[1.0, 1.0], [0.0, 0.0]]))
        posterior = meas.posterior(ProbDist.normalized([1.0, 3.0]))

        np.testing.assert_allclose(posterior[:, 0], [0.25, 0.75])
        np.testing.assert_array_equal(posterior[:, 1], [0.0, 0.0])

    def test_undershoot_channel(self) -> None:
        """Offset 0 is exact; higher offsets slip one level with the error rate."""
        meas = undershoot_measurement(4, 0.2)

        np.testing.assert_allclose(meas.conditional.sum(axis=0), 1.0)
        assert meas.conditional[0, 0] == 1.0
        assert meas.conditional[2, 3] == pytest.approx(0.2)
        assert meas.conditional[3, 3] == pytest.approx(0.8)

    def test_invalid_tables_rejected(self) -> None:
        """Columns must be distributions and the prior must fit the channel."""
        with pytest.raises(InvariantError):
            MeasurementModel(np.array([[0.5, 0.5], [0.2, 0.5]]))
        with pytest.raises(ShapeError):
            MeasurementModel(np.array([1.0]))
        with pytest.raises(ShapeError):
            binary_symmetric_measurement(0.1).joint(ProbDist.uniform(3))
        with pytest.raises(DomainError):
            binary_symmetric_measurement(1.5)


class TestFeedbackLedger:
    """Work bookkeeping of measure, feedback and reset."""

    def test_saturated_cycle_costs_nothing(self) -> None:
        """With every bound saturated the cycle's total work vanishes."""
        ledger = szilard_cycle_ledger(binary_symmetric_measurement(0.1), 0.3, 1.0)

        assert ledger.i_xm == pytest.approx(BSC_INFORMATION, abs=1e-7)
        assert ledger.w_fb == pytest.approx(-ledger.i_xm)
        assert abs(ledger.w_tot) < 1e-12
        assert ledger.extracted == pytest.approx(BSC_INFORMATION, abs=1e-7)

    def test_slack_adds_up(self) -> None:
        """Excess work in each sub-process shows up one-to-one in W_tot."""
        ledger = szilard_cycle_ledger(binary_symmetric_measurement(0.2), 0.0, 2.0, slack=(0.1, 0.2, 0.3))

        assert ledger.w_tot == pytest.approx(0.6)
        assert ledger.second_law_margin == pytest.approx(0.6)

    def test_negative_slack_rejected(self) -> None:
        """Beating a sub-process bound is not an admissible cycle."""
        with pytest.raises(DomainError):
            szilard_cycle_ledger(binary_symmetric_measurement(0.1), 0.0, 1.0, slack=(0.0, -0.1, 0.0))

    def test_bennett_reset_pays_landauer(self) -> None:
        """Free measurement of a fair bit moves the whole kT ln 2 into the reset."""
        ledger = bennett_ledger(perfect_measurement(2), 1.0)

        assert ledger.w_meas == pytest.approx(0.0, abs=1e-15)
        assert ledger.w_reset == pytest.approx(LN2, abs=1e-12)
        assert ledger.w_fb == pytest.approx(-LN2, abs=1e-12)

    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), temperature=st.floats(min_value=0.01, max_value=10.0))
    @settings(max_examples=50, deadline=None)
    def test_random_cycles_obey_second_law(self, seed: int, temperature: float) -> None:
        """Any channel and prior give W_tot >= 0 for a cyclic system."""
        meas, prior = _random_channel(seed, 3, 3)
        ledger = szilard_cycle_ledger(meas, 0.5, temperature, prior)

        assert ledger.second_law_margin >= -1e-12

    def test_inconsistent_total_rejected(self) -> None:
        """W_tot must equal the sum of the three works."""
        with pytest.raises(InvariantError):
            FeedbackLedger(1.0, -0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 1.0)

    def test_feedback_bound(self) -> None:
        """W_fb >= dF - T I."""
        assert feedback_bound(1.0, 0.5, 2.0) == pytest.approx(0.0)
        ledger = szilard_cycle_ledger(perfect_measurement(2), 0.0, 1.0)
        assert ledger.to_json()["second_law_margin"] == pytest.approx(0.0, abs=1e-12)


class TestStaircaseRatchet:
    """Gillespie staircase with and without a controller."""

    def test_detailed_balance_rates(self) -> None:
        """rate_up / rate_down = exp(-dE / kT)."""
        up, down = detailed_balance_rates(2.0, kT=0.5, down=3.0)

        assert down == 3.0
        assert up / down == pytest.approx(math.exp(-4.0))

    def test_rates_must_satisfy_detailed_balance(self) -> None:
        """Equal rates on a sloped staircase are refused."""
        with pytest.raises(DomainError, match="detailed balance"):
            staircase_ratchet(1.0, (1.0, 1.0), None, None, 100)

    def test_free_particle_drifts_downhill(self) -> None:
        """Without feedback the velocity is rate_up - rate_down."""
        rates = detailed_balance_rates(1.0)
        report = staircase_ratchet(1.0, rates, None, None, 5000, seed=3)

        assert report.mean_velocity == pytest.approx(rates[0] - rates[1], abs=0.06)
        assert report.bound_holds is None
        assert report.gain_per_tick == 0.0

    def test_jump_triggered_feedback_is_monotone(self) -> None:
        """Measuring after every jump with a perfect reading never lets the particle fall."""
        report = staircase_ratchet(1.0, detailed_balance_rates(1.0), 0.0, None, 2000, seed=5)

        assert report.monotone
        assert report.mean_velocity > 0.0
        assert report.bound_holds is None
        assert report.levels.shape == (2000,)

    def test_periodic_feedback_respects_information_bound(self) -> None:
        """Periodic noisy measurement stores at most kT I per tick."""
        meas = undershoot_measurement(16, 0.1)
        report = staircase_ratchet(1.0, detailed_balance_rates(1.0), 1.0, meas, 4000, seed=7)

        assert report.gain_per_tick > 0.0
        assert report.bound_holds is True
        assert report.mean_velocity > 0.0
        assert "levels" not in report.to_json()

    def test_argument_validation(self) -> None:
        """Too few ticks or a negative period are rejected."""
        rates = detailed_balance_rates(1.0)
        with pytest.raises(DomainError):
            staircase_ratchet(1.0, rates, None, None, 1)
        with pytest.raises(DomainError):
            staircase_ratchet(1.0, rates, -1.0, None, 100)
