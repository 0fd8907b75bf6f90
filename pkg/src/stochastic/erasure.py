"""
Double-well bit erasure.

Protocol (time in t_relax units, total duration tau + 2):

    [0, 1]            barrier b_high -> b_low, no tilt
    [1, 1 + tau]      tilt 0 -> f_max at low barrier
    [1 + tau, 2 + tau] barrier b_low -> b_high while the tilt returns to 0

The bit starts in equilibrium (50/50 between the wells) and is reset to the
right well (x > 0). For success rate r the mean dissipated heat is bounded by

    Q(r) = kT [ln 2 + r ln r + (1 - r) ln(1 - r)]

and approaches its slow-driving limit as Q_L + alpha / tau.
"""

import logging
import math
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np
from scipy.optimize import curve_fit
from scipy.special import xlogy

from src.common.errors import DomainError
from src.common.statistics import Moments
from src.stochastic.langevin import (
    DEFAULT_CHUNK,
    EquilibriumSampler,
    LangevinParams,
    simulate_ensemble,
)
from src.stochastic.potentials import DoubleWell, Schedule

logger = logging.getLogger(__name__)

B_HIGH = 8.0
B_LOW = 2.2
DEFAULT_F_MAX = 4.0
DEFAULT_DT = 2.5e-4

# Lowering and raising phases, each this long
SETTLE_TIME = 1.0

# Success rates from fewer paths are pilot estimates only
MIN_SUCCESS_SAMPLES = 1000


def erasure_protocol(
    tau: float,
    f_max: float = DEFAULT_F_MAX,
    b_high: float = B_HIGH,
    b_low: float = B_LOW,
) -> DoubleWell:
    """Double well running the three-phase erasure schedule."""
    if not (tau > 0):
        raise DomainError("tilt duration must be positive")
    if not (b_high >= b_low >= 0):
        raise DomainError("need b_high >= b_low >= 0")
    t1 = SETTLE_TIME
    t2 = t1 + tau
    t3 = t2 + SETTLE_TIME
    barrier = Schedule(np.array([0.0, t1, t2, t3]), np.array([b_high, b_low, b_low, b_high]))
    tilt = Schedule(np.array([0.0, t1, t2, t3]), np.array([0.0, 0.0, f_max, 0.0]))
    return DoubleWell(barrier, tilt)


def protocol_duration(tau: float) -> float:
    return tau + 2.0 * SETTLE_TIME


def landauer_success_bound(r: float, kT: float = 1.0) -> float:
    """Q(r) = kT [ln 2 + r ln r + (1 - r) ln(1 - r)]; 0 at r = 1/2, kT ln 2 at r = 1."""
    if not (0.0 <= r <= 1.0):
        raise DomainError("success rate must lie in [0, 1]")
    return kT * (math.log(2.0) + float(xlogy(r, r)) + float(xlogy(1.0 - r, 1.0 - r)))


class ErasureOutcome(NamedTuple):
    """One erasure ensemble; heats are dissipated heats (-q), in kT when kT = 1."""

    tau: float
    f_max: float
    success_rate: float
    success_se: float
    mean_heat: float
    heat_se: float
    mean_work: float
    work_se: float
    bound: float
    bound_holds: bool
    n_traj: int
    heat_samples: np.ndarray
    paths: np.ndarray | None = None

    @property
    def meets_sample_floor(self) -> bool:
        """r comes from at least MIN_SUCCESS_SAMPLES trajectories."""
        return self.n_traj >= MIN_SUCCESS_SAMPLES

    def as_row(self) -> dict[str, float]:
        return {
            "tau": self.tau,
            "f_max": self.f_max,
            "r": self.success_rate,
            "mean_heat": self.mean_heat,
            "SE": self.heat_se,
            "Q_r": self.bound,
        }


def erasure_experiment(
    tau: float,
    f_max: float,
    params: LangevinParams,
    n_traj: int,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
    record: bool = False,
) -> ErasureOutcome:
    """
    Run ``n_traj`` erasures from the equilibrated double well.

    params.n_steps is ignored; the step count follows from the protocol
    duration and params.dt. With ``record`` the outcome keeps every
    position, shape (n_steps + 1, n_traj). Ensembles below
    MIN_SUCCESS_SAMPLES run but are flagged by ``meets_sample_floor``.
    """
    if n_traj < 2:
        raise DomainError("need at least two trajectories for a standard error")
    if n_traj < MIN_SUCCESS_SAMPLES:
        logger.warning(
            "success rate from %d trajectories is a pilot estimate (fewer than %d)", n_traj, MIN_SUCCESS_SAMPLES
        )
    potential = erasure_protocol(tau, f_max)
    run_params = params.for_duration(protocol_duration(tau))
    sampler = EquilibriumSampler(potential, kT=params.kT)
    ensemble = simulate_ensemble(
        potential, run_params, n_traj, sampler, chunk_size=chunk_size, threads=threads, record=record
    )

    dissipated = -ensemble.heat
    heat = Moments.of(dissipated)
    work = Moments.of(ensemble.work)
    success = ensemble.final_positions > 0.0
    r = float(np.mean(success))
    r_se = math.sqrt(max(r * (1.0 - r), 0.0) / n_traj)
    bound = landauer_success_bound(r, params.kT)
    se = heat.std_error
    holds = heat.mean >= bound - 3.0 * se

    if f_max > 0 and abs(r - 0.5) <= 3.0 * max(r_se, 0.5 / math.sqrt(n_traj)):
        logger.warning("tilt f_max=%.3g is ineffective: success rate %.3f is indistinguishable from 1/2", f_max, r)
    if not holds:
        logger.warning("mean dissipated heat %.4g below Q(r) = %.4g - 3 SE", heat.mean, bound)
    logger.info("erasure tau=%.3g: r=%.4f, <Q>=%.4f +- %.4f, Q(r)=%.4f", tau, r, heat.mean, se, bound)

    return ErasureOutcome(
        tau=tau,
        f_max=f_max,
        success_rate=r,
        success_se=r_se,
        mean_heat=heat.mean,
        heat_se=se,
        mean_work=work.mean,
        work_se=work.std_error,
        bound=bound,
        bound_holds=holds,
        n_traj=n_traj,
        heat_samples=dissipated,
        paths=ensemble.paths,
    )


class FiniteTimeFit(NamedTuple):
    """Least-squares fit heat = q_landauer + alpha / tau."""

    q_landauer: float
    alpha: float
    q_landauer_se: float
    alpha_se: float


def fit_finite_time(
    taus: Sequence[float],
    heats: Sequence[float],
    errors: Sequence[float] | None = None,
) -> FiniteTimeFit:
    """Weighted fit of mean dissipated heat against protocol duration."""
    t = np.asarray(taus, dtype=np.float64)
    q = np.asarray(heats, dtype=np.float64)
    if t.size < 2 or t.shape != q.shape:
        raise DomainError("need at least two (tau, heat) points")
    sigma = None
    if errors is not None:
        sigma = np.asarray(errors, dtype=np.float64)
        sigma = np.where(sigma > 0, sigma, np.min(sigma[sigma > 0]) if np.any(sigma > 0) else 1.0)

    popt, pcov = curve_fit(
        lambda tau, q_l, alpha: q_l + alpha / tau,
        t,
        q,
        p0=(float(q[-1]), 1.0),
        sigma=sigma,
        absolute_sigma=sigma is not None,
    )
    perr = np.sqrt(np.diag(pcov))
    return FiniteTimeFit(float(popt[0]), float(popt[1]), float(perr[0]), float(perr[1]))


def erasure_sweep(
    taus: Sequence[float],
    f_max: float,
    params: LangevinParams,
    n_traj: int,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
) -> tuple[list[ErasureOutcome], FiniteTimeFit | None]:
    """Erasure at each tau in order, plus the finite-time fit when there are two or more points."""
    outcomes = [erasure_experiment(tau, f_max, params, n_traj, chunk_size, threads) for tau in taus]
    fit = None
    if len(outcomes) >= 2:
        fit = fit_finite_time(
            [o.tau for o in outcomes],
            [o.mean_heat for o in outcomes],
            [o.heat_se for o in outcomes],
        )
    return outcomes, fit
