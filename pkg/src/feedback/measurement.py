"""
Classical measurement channels and the free energy they create.

A MeasurementModel stores p(m|x) as a table indexed [m, x]; every column is a
distribution over outcomes. Combined with a prior rho_X it gives the joint
p(x, m), the outcome marginal p_M and the posteriors rho_{X|M}. Bayes' rule
then guarantees that averaging the posteriors over outcomes gives back the
prior: the measurement does not disturb the system.

Measuring at temperature T raises the nonequilibrium free energy by
T I(X:M), the work a feedback controller can at most extract afterwards.
"""

from dataclasses import dataclass

import numpy as np

from src.common.errors import DomainError, InvariantError, ShapeError
from src.info_core.entropy import mutual_information_classical
from src.info_core.types import IDENTITY_TOL, INVARIANT_TOL, JointDist, ProbDist


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """Channel p(m|x), table indexed [m, x]."""

    conditional: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.conditional, dtype=np.float64)
        if c.ndim != 2 or c.size == 0:
            raise ShapeError("measurement table must be a non-empty matrix")
        if np.any(~np.isfinite(c)) or np.any(c < 0):
            raise InvariantError("measurement probabilities must be finite and non-negative")
        sums = c.sum(axis=0)
        if np.max(np.abs(sums - 1.0)) > INVARIANT_TOL:
            raise InvariantError(f"columns of p(m|x) must sum to 1, got {sums!r}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "conditional", c)

    @property
    def n_outcomes(self) -> int:
        return int(self.conditional.shape[0])

    @property
    def n_states(self) -> int:
        return int(self.conditional.shape[1])

    def _prior(self, prior: ProbDist) -> np.ndarray:
        if len(prior) != self.n_states:
            raise ShapeError(f"prior has {len(prior)} states, channel expects {self.n_states}")
        return prior.weights

    def joint(self, prior: ProbDist) -> JointDist:
        """p(x, m) = rho_X(x) p(m|x), table indexed [x, m]."""
        return JointDist((self.conditional * self._prior(prior)[np.newaxis, :]).T)

    def marginal(self, prior: ProbDist) -> ProbDist:
        """p_M(m)."""
        return self.joint(prior).marginal_y

    def posterior(self, prior: ProbDist) -> np.ndarray:
        """rho_{X|M}(x|m), table indexed [x, m]; columns of impossible outcomes are zero."""
        table = self.joint(prior).table
        p_m = table.sum(axis=0)
        safe = np.where(p_m > 0, p_m, 1.0)
        return np.where(p_m[np.newaxis, :] > 0, table / safe[np.newaxis, :], 0.0)

    def check_non_disturbance(self, prior: ProbDist) -> float:
        """
        Verify sum_m p_M(m) rho_{X|M}(x|m) = rho_X(x).

        Returns:
            The largest deviation

        Raises:
            InvariantError: if it exceeds 1e-10
        """
        rebuilt = self.posterior(prior) @ self.marginal(prior).weights
        deviation = float(np.max(np.abs(rebuilt - prior.weights)))
        if deviation > IDENTITY_TOL:
            raise InvariantError(f"posterior average misses the prior by {deviation:.3g}")
        return deviation

    def mutual_information(self, prior: ProbDist) -> float:
        """I(X:M) in nats."""
        return mutual_information_classical(self.joint(prior))


def binary_symmetric_measurement(error: float) -> MeasurementModel:
    """Two-outcome channel that reports the wrong bit with probability ``error``."""
    if not (0.0 <= error <= 1.0):
        raise DomainError("measurement error must lie in [0, 1]")
    return MeasurementModel(np.array([[1.0 - error, error], [error, 1.0 - error]]))


def perfect_measurement(n: int) -> MeasurementModel:
    return MeasurementModel(np.eye(n))


def uninformative_measurement(n_states: int, outcomes: ProbDist) -> MeasurementModel:
    """Every state produces the same outcome distribution."""
    return MeasurementModel(np.tile(outcomes.weights[:, np.newaxis], (1, n_states)))


def undershoot_measurement(n: int, error: float) -> MeasurementModel:
    """
    Reads offset y correctly with probability 1 - error, otherwise reports y - 1.

    Offset 0 is always read correctly. Used by the staircase ratchet, where an
    undershoot places the block one step too low.
    """
    if n < 1:
        raise DomainError("need at least one offset")
    if not (0.0 <= error <= 1.0):
        raise DomainError("measurement error must lie in [0, 1]")
    table = np.eye(n) * (1.0 - error)
    table[0, 0] = 1.0
    idx = np.arange(1, n)
    table[idx - 1, idx] = error
    return MeasurementModel(table)


def measurement_gain(rho_x: ProbDist, meas: MeasurementModel, temperature: float) -> float:
    """Free energy T I(X:M) created by measuring ``rho_x``; always >= 0."""
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    return temperature * max(meas.mutual_information(rho_x), 0.0)
