"""
Work and heat recomputed from a stored path.

These are independent of the increments the integrator records, so they can
audit a Trajectory (or a dump read back from disk) against any potential.
"""

import numpy as np

from src.stochastic.langevin import Trajectory
from src.stochastic.potentials import PotentialSpec


def _coefficient_columns(traj: Trajectory, potential: PotentialSpec) -> np.ndarray:
    return potential.coefficients(traj.times).T


def trajectory_work(traj: Trajectory, potential: PotentialSpec) -> float:
    """W = sum_i [U(x_i, t_{i+1}) - U(x_i, t_i)]."""
    c = _coefficient_columns(traj, potential)
    x = traj.positions[:-1]
    return float(np.sum(potential.energy(x, c[:, 1:]) - potential.energy(x, c[:, :-1])))


def trajectory_heat(traj: Trajectory, potential: PotentialSpec) -> float:
    """q = sum_i [U(x_{i+1}, t_{i+1}) - U(x_i, t_{i+1})], heat absorbed by the particle."""
    c = _coefficient_columns(traj, potential)[:, 1:]
    return float(np.sum(potential.energy(traj.positions[1:], c) - potential.energy(traj.positions[:-1], c)))


def potential_energy_change(traj: Trajectory, potential: PotentialSpec) -> float:
    c = _coefficient_columns(traj, potential)
    return float(
        potential.energy(traj.positions[-1:], c[:, -1:])[0] - potential.energy(traj.positions[:1], c[:, :1])[0]
    )


def first_law_residual(traj: Trajectory, potential: PotentialSpec) -> float:
    """|dU - W - q| for the whole path."""
    return abs(
        potential_energy_change(traj, potential) - trajectory_work(traj, potential) - trajectory_heat(traj, potential)
    )
