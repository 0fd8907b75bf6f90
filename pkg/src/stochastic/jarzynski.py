"""
Jarzynski equality on a harmonic stiffness protocol.

    <exp(-beta W)> = exp(-beta dF),   dF = (kT/2) ln(k_2 / k_1)

The ensemble starts in exact equilibrium at k_1 (Gaussian draws), so the
only bias left is the time step. Jensen's inequality gives <W> >= dF on
every protocol; <W> - dF is the dissipated work.
"""

import logging
import math
from typing import Any, NamedTuple

import numpy as np

from src.common.errors import DomainError
from src.common.statistics import Moments, jackknife
from src.stochastic.langevin import DEFAULT_CHUNK, EquilibriumSampler, LangevinParams, simulate_ensemble
from src.stochastic.potentials import Harmonic, Schedule

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.01


def stiffness_ramp(k1: float, k2: float, tau: float) -> Harmonic:
    """Linear ramp k1 -> k2 over [0, tau]."""
    if not (k1 > 0 and k2 > 0):
        raise DomainError("stiffnesses must be positive")
    if not (tau > 0):
        raise DomainError("ramp duration must be positive")
    return Harmonic(Schedule.ramp(k1, k2, 0.0, tau))


def harmonic_free_energy_change(k1: float, k2: float, kT: float = 1.0) -> float:
    """(kT/2) ln(k2 / k1)."""
    return 0.5 * kT * math.log(k2 / k1)


class JarzynskiReport(NamedTuple):
    mean_exp_work: float
    exp_delta_f: float
    relative_deviation: float
    ratio_se: float
    free_energy_estimate: float
    free_energy_se: float
    delta_f: float
    mean_work: float
    work_se: float
    dissipated_work: float
    jensen_holds: bool
    n_traj: int

    def to_json(self) -> dict[str, Any]:
        return dict(self._asdict())


def jarzynski_check(
    potential: Harmonic,
    params: LangevinParams,
    n_traj: int,
    delta_f: float | None = None,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
) -> JarzynskiReport:
    """
    Estimate both sides of the Jarzynski equality.

    Args:
        potential: Harmonic trap; the protocol runs over params.duration
        params: Langevin parameters
        n_traj: Ensemble size (>= 2)
        delta_f: Free-energy change; defaults to the harmonic closed form
        chunk_size: Trajectories per random stream
        threads: Workers for the ensemble

    Returns:
        JarzynskiReport; the jackknife gives the error of the free-energy
        estimate -kT ln <exp(-beta W)>
    """
    if n_traj < 2:
        raise DomainError("need at least two trajectories")
    kT = params.kT
    if not (kT > 0):
        raise DomainError("Jarzynski check needs a positive temperature")
    k1 = float(potential.stiffness(0.0))
    k2 = float(potential.stiffness(params.duration))
    if delta_f is None:
        delta_f = potential.free_energy(k2, kT) - potential.free_energy(k1, kT)

    sampler = EquilibriumSampler(potential, kT=kT)
    ensemble = simulate_ensemble(potential, params, n_traj, sampler, chunk_size=chunk_size, threads=threads)

    work = ensemble.work
    boltzmann = np.exp(-work / kT)
    weights = Moments.of(boltzmann)
    exp_df = math.exp(-delta_f / kT)
    ratio = weights.mean / exp_df

    estimate, estimate_se = jackknife(boltzmann, lambda m: -kT * np.log(m))
    w = Moments.of(work)
    dissipated = w.mean - delta_f
    jensen = w.mean >= delta_f - 3.0 * w.std_error

    logger.info(
        "jarzynski k %.3g->%.3g: <e^-bW> e^{bdF} = %.5f, <W> - dF = %.4g",
        k1,
        k2,
        ratio,
        dissipated,
    )
    return JarzynskiReport(
        mean_exp_work=weights.mean,
        exp_delta_f=exp_df,
        relative_deviation=abs(ratio - 1.0),
        ratio_se=weights.std_error / exp_df,
        free_energy_estimate=estimate,
        free_energy_se=estimate_se,
        delta_f=delta_f,
        mean_work=w.mean,
        work_se=w.std_error,
        dissipated_work=dissipated,
        jensen_holds=jensen,
        n_traj=n_traj,
    )


def ramp_check(
    k1: float,
    k2: float,
    tau: float,
    n_traj: int,
    dt: float = DEFAULT_DT,
    seed: int = 0,
    kT: float = 1.0,
    threads: int | None = None,
) -> JarzynskiReport:
    """Jarzynski check for a k1 -> k2 ramp of duration tau (tau <= dt gives a one-step quench)."""
    tau_eff = max(tau, dt)
    params = LangevinParams(kT=kT, dt=dt, seed=seed).for_duration(tau_eff)
    return jarzynski_check(stiffness_ramp(k1, k2, tau_eff), params, n_traj, threads=threads)
