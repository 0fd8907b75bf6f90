"""
Time-dependent potentials for the overdamped Langevin engine.

Dimensionless units: lengths in well separations, energies in kT, time in
t_relax = friction * separation^2 / kT.

Each potential turns its schedules into a coefficient table once per
simulation (one row per time point), and the integrator then evaluates
energy and gradient from rows of that table. This keeps the inner loop free
of np.interp calls.

    DoubleWell   U(x, t) = b(t) ((x/s)^2 - 1)^2 - f(t) x   on [-2s, 2s], reflecting walls
    Harmonic     U(x, t) = k(t) x^2 / 2
"""

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from src.common.errors import DomainError, ShapeError


@dataclass(frozen=True, eq=False)
class Schedule:
    """Piecewise-linear function of time through (times, values), constant outside."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=np.float64).ravel()
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if t.size == 0 or t.shape != v.shape:
            raise ShapeError("schedule needs matching, non-empty times and values")
        if np.any(np.diff(t) < 0):
            raise DomainError("schedule times must be non-decreasing")
        if np.any(~np.isfinite(v)):
            raise DomainError("schedule values must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, value: float) -> "Schedule":
        return cls(np.array([0.0]), np.array([value]))

    @classmethod
    def ramp(cls, start: float, stop: float, t0: float, t1: float) -> "Schedule":
        """start until t0, linear to stop at t1, stop afterwards."""
        return cls(np.array([t0, t1]), np.array([start, stop]))

    def __call__(self, t: float | np.ndarray) -> np.ndarray:
        return np.interp(t, self.times, self.values)

    @property
    def end(self) -> float:
        return float(self.times[-1])

    @property
    def is_static(self) -> bool:
        return bool(np.all(self.values == self.values[0]))


class PotentialSpec(Protocol):
    """What the integrator needs from a potential."""

    length_scale: float
    walls: tuple[float, float] | None

    def coefficients(self, times: np.ndarray) -> np.ndarray: ...

    def energy(self, x: np.ndarray, c: np.ndarray) -> np.ndarray: ...

    def gradient(self, x: np.ndarray, c: np.ndarray) -> np.ndarray: ...

    def max_curvature(self, c: np.ndarray) -> float: ...


@dataclass(frozen=True, eq=False)
class DoubleWell:
    """Quartic double well with barrier height b(t) and linear tilt f(t)."""

    barrier: Schedule
    tilt: Schedule = field(default_factory=lambda: Schedule.constant(0.0))
    separation: float = 1.0

    def __post_init__(self) -> None:
        if not (self.separation > 0):
            raise DomainError("well separation must be positive")
        if np.any(self.barrier.values < 0):
            raise DomainError("barrier height must be non-negative")

    @property
    def length_scale(self) -> float:
        return self.separation

    @property
    def walls(self) -> tuple[float, float]:
        return -2.0 * self.separation, 2.0 * self.separation

    def coefficients(self, times: np.ndarray) -> np.ndarray:
        """Rows (b, f)."""
        return np.column_stack([self.barrier(times), self.tilt(times)])

    def energy(self, x: np.ndarray, c: np.ndarray) -> np.ndarray:
        u = x / self.separation
        d = u * u - 1.0
        return c[0] * d * d - c[1] * x

    def gradient(self, x: np.ndarray, c: np.ndarray) -> np.ndarray:
        u = x / self.separation
        return 4.0 * c[0] * u * (u * u - 1.0) / self.separation - c[1]

    def max_curvature(self, c: np.ndarray) -> float:
        """max |U''| over the walled domain: 44 b / s^2 at the walls."""
        return float(np.max(np.abs(c[:, 0]))) * 44.0 / self.separation**2


@dataclass(frozen=True, eq=False)
class Harmonic:
    """Harmonic trap with stiffness k(t) centred at the origin."""

    stiffness: Schedule
    length_scale: float = 10.0
    walls: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if np.any(self.stiffness.values < 0):
            raise DomainError("stiffness must be non-negative")

    def coefficients(self, times: np.ndarray) -> np.ndarray:
        """Rows (k,)."""
        return self.stiffness(times)[:, np.newaxis]

    def energy(self, x: np.ndarray, c: np.ndarray) -> np.ndarray:
        return 0.5 * c[0] * x * x

    def gradient(self, x: np.ndarray, c: np.ndarray) -> np.ndarray:
        return c[0] * x

    def max_curvature(self, c: np.ndarray) -> float:
        return float(np.max(np.abs(c[:, 0])))

    def free_energy(self, k: float, kT: float = 1.0) -> float:
        """F = (kT/2) ln(k / (2 pi kT)), up to a k-independent constant."""
        if not (k > 0):
            raise DomainError("free energy needs a positive stiffness")
        return 0.5 * kT * np.log(k / (2.0 * np.pi * kT))


def free_particle() -> Harmonic:
    """Zero-force potential for pure diffusion."""
    return Harmonic(Schedule.constant(0.0))
