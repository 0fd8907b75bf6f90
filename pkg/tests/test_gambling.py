"""
Tests for src/feedback/gambling.py: the two-state gambling demon.
"""

import math

import numpy as np
import pytest

from src.common.errors import DomainError
from src.feedback.gambling import (
    GamblingParams,
    StoppingKind,
    StoppingRule,
    TwoStateProtocol,
    density_tables,
    equilibrium_free_energy,
    gambling_demon,
)

N_TRAJ = 20_000


@pytest.fixture(scope="module")
def ramp() -> TwoStateProtocol:
    """Gap raised 0 -> 4 kT over tau = 1 at total rate 0.5."""
    return TwoStateProtocol.linear(0.0, 4.0, 1.0, rate=0.5)


class TestDensityTables:
    """Forward and reverse occupations on the grid."""

    def test_static_protocol_stays_in_equilibrium(self) -> None:
        """With the gap frozen both densities equal the Gibbs occupation everywhere."""
        tables = density_tables(TwoStateProtocol.static(1.5), 2.0, GamblingParams(n_grid=50))
        pi = 1.0 / (1.0 + math.exp(1.5))

        np.testing.assert_allclose(tables.forward_excited, pi, rtol=1e-12)
        np.testing.assert_allclose(tables.reverse_excited, pi, rtol=1e-12)

    def test_end_points(self, ramp: TwoStateProtocol) -> None:
        """Forward starts at pi(lambda_0); reverse ends there at pi(lambda_N)."""
        tables = density_tables(ramp, 1.0, GamblingParams(n_grid=100))

        assert tables.forward_excited[0] == pytest.approx(0.5)
        assert tables.reverse_excited[-1] == pytest.approx(tables.pi_excited[-1])
        assert tables.forward_excited[-1] > tables.pi_excited[-1]
        assert tables.decay == pytest.approx(math.exp(-0.5 / 100))

    def test_free_energy(self) -> None:
        """F = -kT ln(1 + exp(-lambda/kT)); -kT ln 2 at zero gap."""
        assert float(equilibrium_free_energy(0.0, 2.0)) == pytest.approx(-2.0 * math.log(2.0))
        assert float(equilibrium_free_energy(50.0, 1.0)) == pytest.approx(0.0, abs=1e-20)


class TestStoppingRules:
    """Rule construction."""

    def test_constructors(self) -> None:
        """deadline has no threshold; work_threshold carries one."""
        assert StoppingRule.deadline(2.0).kind is StoppingKind.DEADLINE_ONLY
        rule = StoppingRule.work_threshold(0.5, 1.0)
        assert rule.kind is StoppingKind.WORK_THRESHOLD
        assert rule.threshold == 0.5

    def test_validation(self) -> None:
        """Non-positive horizons and missing thresholds are rejected."""
        with pytest.raises(DomainError):
            StoppingRule.deadline(0.0)
        with pytest.raises(DomainError):
            StoppingRule(StoppingKind.WORK_THRESHOLD, 1.0)
        with pytest.raises(DomainError):
            TwoStateProtocol.static(1.0, rate=0.0)
        with pytest.raises(DomainError):
            GamblingParams(kT=0.0)


class TestGamblingDemon:
    """Fluctuation theorem and second-law margins at stopping times."""

    def test_static_protocol_is_trivial(self) -> None:
        """Nothing is driven: no work, no distinguishability, estimator exactly 1."""
        report = gambling_demon(
            TwoStateProtocol.static(1.0), GamblingParams(n_grid=20, seed=1), StoppingRule.deadline(1.0), 1000
        )

        assert report.mean_w_stopped == 0.0
        assert report.ft_estimator == pytest.approx(1.0, abs=1e-12)
        assert report.margin == pytest.approx(0.0, abs=1e-12)

    def test_deadline_rule(self, ramp: TwoStateProtocol) -> None:
        """Stopping at tau: the estimator is 1 within 3 SE and the margin is non-negative."""
        report = gambling_demon(ramp, GamblingParams(seed=2), StoppingRule.deadline(1.0), N_TRAJ)

        assert report.ft_holds
        assert report.inequality_holds
        assert report.mean_stopping_time == pytest.approx(1.0)
        assert report.n_excluded == 0
        assert report.n_traj == N_TRAJ

    def test_threshold_rule_beats_free_energy(self, ramp: TwoStateProtocol) -> None:
        """Stopping at the first overshoot extracts more than dF yet keeps the refined inequality."""
        report = gambling_demon(ramp, GamblingParams(seed=3), StoppingRule.work_threshold(0.5, 1.0), N_TRAJ)

        assert report.ft_holds
        assert report.inequality_holds
        assert report.extracts_more_than_invested
        assert report.mean_stopping_time < 1.0
        assert report.to_json()["delta_f_convention"].startswith("equilibrium")

    def test_same_seed_same_report(self, ramp: TwoStateProtocol) -> None:
        """Reports are a pure function of the seed."""
        params = GamblingParams(n_grid=100, seed=4, chunk_size=500)
        rule = StoppingRule.work_threshold(0.5, 1.0)

        assert gambling_demon(ramp, params, rule, 2000) == gambling_demon(ramp, params, rule, 2000)

    def test_needs_two_trajectories(self, ramp: TwoStateProtocol) -> None:
        """Ensemble statistics need at least two paths."""
        with pytest.raises(DomainError):
            gambling_demon(ramp, GamblingParams(), StoppingRule.deadline(1.0), 1)

    @pytest.mark.slow
    def test_estimator_error_scales_as_inverse_root_n(self, ramp: TwoStateProtocol) -> None:
        """The estimator stays within 3 SE of 1 and SE * sqrt(n) is stable over two decades of n."""
        rule = StoppingRule.deadline(1.0)
        scaled = []
        for n in (1_000, 10_000, 100_000):
            report = gambling_demon(ramp, GamblingParams(seed=6), rule, n)
            assert abs(report.ft_estimator - 1.0) <= 3.0 * report.ft_se
            scaled.append(report.ft_se * math.sqrt(report.n_traj))

        assert max(scaled) / min(scaled) < 1.5
