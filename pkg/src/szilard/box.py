"""
Particles in a one-dimensional box split by a movable wall.

Single-particle levels in a segment of length l (hbar = k_B = 1):

    eps_n(l) = pi^2 n^2 / (2 m l^2),   n = 1 .. n_max

The k-particle partition function of a segment is built from the
single-particle Boltzmann factors x_n = exp(-beta eps_n):

    boltzmann   z^k / k!
    fermion     e_k(x)   elementary symmetric polynomial (no double occupancy)
    boson       h_k(x)   complete homogeneous polynomial (any occupancy)

Algorithm:
    e_k and h_k are sums over ordered level tuples n_1 < ... < n_k
    (resp. n_1 <= ... <= n_k). Both are evaluated order by order with
    prefix sums in log space (np.logaddexp.accumulate), so every
    occupation list is enumerated exactly once and nothing underflows
    even at beta eps_1 of several hundred.

Key insight: Z_k depends on (beta, l) only through beta / l^2, which makes
the wall force proportional to the mean energy of each side.
"""

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp

from src.common.errors import DomainError, InvariantError, TruncationError
from src.info_core.types import ProbDist, SpectrumModel

logger = logging.getLogger(__name__)

MAX_PARTICLES = 3
MIN_LEVELS = 50

# e^{-beta eps_{n_max}} / z must stay below this
TAIL_TOL = 1e-10

# with_cutoff() aims for beta eps_{n_max} >= this
CUTOFF_EXPONENT = 40.0

# Wall positions closer than this fraction of L to either end are not searched
WALL_MARGIN = 1e-4
FD_STEP = 1e-7


class Statistics(enum.Enum):
    BOLTZMANN = "boltzmann"
    BOSON = "boson"
    FERMION = "fermion"


@dataclass(frozen=True)
class BoxSpec:
    """Box of length L holding N identical particles of mass m."""

    length: float
    mass: float
    n_particles: int
    statistics: Statistics
    n_max: int = 200

    def __post_init__(self) -> None:
        if not (self.length > 0) or not (self.mass > 0):
            raise DomainError("length and mass must be positive")
        if not (1 <= self.n_particles <= MAX_PARTICLES):
            raise DomainError(f"n_particles must lie in [1, {MAX_PARTICLES}]")
        if self.n_max < MIN_LEVELS:
            raise DomainError(f"n_max must be at least {MIN_LEVELS}")
        object.__setattr__(self, "statistics", Statistics(self.statistics))

    def ground_energy(self, segment_length: float | None = None) -> float:
        """eps_1 of a segment (the whole box by default)."""
        seg = self.length if segment_length is None else segment_length
        return math.pi**2 / (2.0 * self.mass * seg**2)

    def with_cutoff(self, beta: float) -> "BoxSpec":
        """Copy with n_max large enough that beta eps_{n_max}(L) >= CUTOFF_EXPONENT."""
        n = math.ceil(math.sqrt(CUTOFF_EXPONENT / (beta * self.ground_energy())))
        return replace(self, n_max=max(MIN_LEVELS, n))

    def check_truncation(self, beta: float) -> None:
        """Raise TruncationError if the level tail at full length is not negligible.

        Smaller segments have higher levels, so the full box is the worst case.
        """
        log_x = -beta * self.ground_energy() * np.arange(1, self.n_max + 1) ** 2
        tail = float(np.exp(log_x[-1] - logsumexp(log_x)))
        if tail >= TAIL_TOL:
            raise TruncationError(
                f"level tail {tail:.2e} >= {TAIL_TOL:g} with n_max={self.n_max}; use with_cutoff({beta!r})"
            )


@dataclass(frozen=True)
class WallConfig:
    """Wall at distance ``position`` from the left end."""

    position: float

    def check(self, box: BoxSpec) -> None:
        if not (0.0 < self.position < box.length):
            raise DomainError(f"wall position {self.position!r} outside (0, {box.length!r})")


def reduced_beta(box: BoxSpec, beta: float) -> float:
    """beta eps_1(L), the dimensionless temperature scale of the box."""
    return beta * box.ground_energy()


def box_levels(box: BoxSpec, segment_length: float) -> SpectrumModel:
    """Single-particle spectrum of a segment."""
    if not (segment_length > 0):
        raise DomainError("segment length must be positive")
    n = np.arange(1, box.n_max + 1)
    return SpectrumModel(box.ground_energy(segment_length) * n**2)


# ---------------------------------------------------------------------------
# k-particle partition functions
# ---------------------------------------------------------------------------


def _exclusive(prefix: np.ndarray) -> np.ndarray:
    """Shift an inclusive log prefix sum one place right (log 0 = -inf first)."""
    out = np.empty_like(prefix)
    out[0] = -np.inf
    out[1:] = prefix[:-1]
    return out


def log_symmetric_sum(log_x: np.ndarray, k: int, statistics: Statistics) -> float:
    """
    ln of the k-particle partition function from single-particle log weights.

    Args:
        log_x: -beta eps_n for n = 1 .. n_max
        k: particle count (0 gives ln 1 = 0)
        statistics: occupation rule

    Returns:
        ln Z_k
    """
    if k == 0:
        return 0.0
    if statistics is Statistics.BOLTZMANN:
        return k * float(logsumexp(log_x)) - float(gammaln(k + 1))

    prev = np.zeros_like(log_x)  # ln of the order-0 prefix, identically 1
    for order in range(1, k + 1):
        lower = _exclusive(prev) if statistics is Statistics.FERMION and order > 1 else prev
        terms = log_x + lower
        prev = np.logaddexp.accumulate(terms)
    return float(prev[-1])


def log_segment_partition(box: BoxSpec, segment_length: float, k: int, beta: float) -> float:
    """ln Z_k for k particles alone in a segment."""
    if k == 0:
        return 0.0
    n = np.arange(1, box.n_max + 1)
    log_x = -beta * box.ground_energy(segment_length) * n**2
    return log_symmetric_sum(log_x, k, box.statistics)


def log_sector_partition(box: BoxSpec, position: float, m_left: int, beta: float) -> float:
    """ln Z_m(l) = ln Z_m(l) [left] + ln Z_{N-m}(L - l) [right]."""
    if not (0 <= m_left <= box.n_particles):
        raise DomainError(f"m_left must lie in [0, {box.n_particles}]")
    left = log_segment_partition(box, position, m_left, beta) if m_left > 0 else 0.0
    n_right = box.n_particles - m_left
    right = log_segment_partition(box, box.length - position, n_right, beta) if n_right > 0 else 0.0
    return left + right


def sector_partition(box: BoxSpec, wall: WallConfig, m_left: int, beta: float) -> float:
    """Z_m(l): m particles left of the wall, N - m to its right."""
    wall.check(box)
    box.check_truncation(beta)
    return math.exp(log_sector_partition(box, wall.position, m_left, beta))


def log_wall_partition(box: BoxSpec, position: float, beta: float) -> float:
    """ln Z(l) = ln sum_m Z_m(l)."""
    return float(
        logsumexp([log_sector_partition(box, position, m, beta) for m in range(box.n_particles + 1)])
    )


def log_box_partition(box: BoxSpec, beta: float) -> float:
    """ln Z(L) without a wall."""
    return log_segment_partition(box, box.length, box.n_particles, beta)


def measurement_probs(box: BoxSpec, wall: WallConfig, beta: float) -> ProbDist:
    """p_m = Z_m(l) / Z(l) for m = 0 .. N."""
    wall.check(box)
    box.check_truncation(beta)
    logs = np.array([log_sector_partition(box, wall.position, m, beta) for m in range(box.n_particles + 1)])
    return ProbDist.normalized(np.exp(logs - logsumexp(logs)))


# ---------------------------------------------------------------------------
# Equilibrium wall
# ---------------------------------------------------------------------------


class WallEquilibrium(NamedTuple):
    """Where the wall comes to rest; ``boundary`` marks a wall pushed to an end of the box."""

    position: float
    boundary: bool


def _wall_force(box: BoxSpec, position: float, m_left: int, beta: float) -> float:
    """d/dl ln Z_m(l) by central difference."""
    h = FD_STEP * box.length
    return (
        log_sector_partition(box, position + h, m_left, beta)
        - log_sector_partition(box, position - h, m_left, beta)
    ) / (2.0 * h)


def equilibrium_wall(box: BoxSpec, beta: float, m_left: int) -> WallEquilibrium:
    """
    Position where the pressures on the two sides of the wall balance.

    m_left = 0 or N leaves one side empty and the wall is pushed to the end
    of the box (boundary flag, position 0 or L). With N = 2m the balance is at
    L/2 by symmetry. Otherwise the root of d ln Z_m / dl is bracketed on
    (margin, L - margin). With no sign change the wall is clamped to the margin
    on the side the force points to and flagged as boundary; both sides
    still hold particles there, so the sector keeps its own Z_m.
    """
    n = box.n_particles
    if not (0 <= m_left <= n):
        raise DomainError(f"m_left must lie in [0, {n}]")
    if m_left == 0:
        return WallEquilibrium(0.0, True)
    if m_left == n:
        return WallEquilibrium(box.length, True)
    if 2 * m_left == n:
        return WallEquilibrium(0.5 * box.length, False)

    lo = WALL_MARGIN * box.length
    hi = box.length - lo
    f_lo = _wall_force(box, lo, m_left, beta)
    f_hi = _wall_force(box, hi, m_left, beta)
    if f_lo * f_hi > 0:
        logger.info("no force sign change for m=%d; wall clamped to the margin", m_left)
        return WallEquilibrium(hi if f_lo > 0 else lo, True)

    root = brentq(lambda x: _wall_force(box, x, m_left, beta), lo, hi, xtol=1e-13 * box.length, rtol=1e-13)
    return WallEquilibrium(float(root), False)


def log_sector_at_equilibrium(box: BoxSpec, beta: float, m_left: int, eq: WallEquilibrium) -> tuple[float, float]:
    """
    (ln Z_m(l_eq), ln Z(l_eq)).

    Both equal ln Z(L) when one side is empty (m_left = 0 or N). A clamped
    wall with particles on both sides is evaluated at its clamped position.
    """
    if eq.boundary and m_left in (0, box.n_particles):
        full = log_box_partition(box, beta)
        return full, full
    log_zm = log_sector_partition(box, eq.position, m_left, beta)
    log_z = log_wall_partition(box, eq.position, beta)
    if log_zm > log_z + 1e-12:
        raise InvariantError("sector partition exceeds the total")
    return log_zm, log_z
