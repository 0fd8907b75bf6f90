"""
Equilibrium thermodynamics of a discrete spectrum.

Every quantity is computed from ln Z with scipy.special.logsumexp, so the
Boltzmann weights never overflow (the lowest level is factored out before
exponentiation). beta = +inf is accepted and gives the ground-state limit.

    Z = sum_n g_n exp(-beta eps_n)
    E = sum_n p_n eps_n = -d ln Z / d beta
    F = -ln Z / beta
    S = beta E + ln Z
"""

import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from src.common.errors import DomainError, ShapeError
from src.info_core.entropy import relative_entropy, von_neumann_entropy
from src.info_core.types import (
    DensityMatrix,
    InverseTemperature,
    ProbDist,
    SpectrumModel,
    as_beta,
    as_density,
)

Beta = float | InverseTemperature


def _spectrum(h: SpectrumModel | np.ndarray) -> SpectrumModel:
    if isinstance(h, SpectrumModel):
        return h
    return SpectrumModel(np.asarray(h, dtype=np.float64))


def _level_weights(spec: SpectrumModel, beta: float) -> np.ndarray:
    """Per-level probabilities g_n e^{-beta eps_n} / Z."""
    if math.isinf(beta):
        ground = spec.levels == spec.levels[0]
        w = np.where(ground, spec.degeneracies, 0).astype(np.float64)
        return w / w.sum()
    log_w = -beta * spec.levels + np.log(spec.degeneracies)
    return np.exp(log_w - logsumexp(log_w))


# ---------------------------------------------------------------------------
# Gibbs state
# ---------------------------------------------------------------------------


def gibbs_state(h: SpectrumModel | np.ndarray, beta: Beta) -> ProbDist | DensityMatrix:
    """
    Thermal state at inverse temperature beta.

    Args:
        h: SpectrumModel (returns microstate populations, degenerate levels
           repeated) or a Hermitian Hamiltonian matrix (returns a DensityMatrix)
        beta: Inverse temperature, +inf for the ground-state limit

    Returns:
        ProbDist for a spectrum, DensityMatrix for a matrix Hamiltonian
    """
    b = as_beta(beta)
    if isinstance(h, SpectrumModel):
        per_level = _level_weights(h, b)
        return ProbDist(np.repeat(per_level / h.degeneracies, h.degeneracies))

    hm = np.asarray(h, dtype=np.complex128)
    if hm.ndim != 2 or hm.shape[0] != hm.shape[1]:
        raise ShapeError(f"Hamiltonian must be square, got shape {hm.shape}")
    energies, vecs = np.linalg.eigh(0.5 * (hm + hm.conj().T))
    p = _level_weights(SpectrumModel(energies), b)
    # SpectrumModel sorts stably and eigh returns ascending energies, so order matches
    return DensityMatrix((vecs * p) @ vecs.conj().T)


def gibbs_density(h: SpectrumModel, beta: Beta) -> DensityMatrix:
    """Gibbs state of a spectrum as a diagonal DensityMatrix in the energy basis."""
    p = gibbs_state(h, beta)
    assert isinstance(p, ProbDist)
    return DensityMatrix.diagonal(p)


# ---------------------------------------------------------------------------
# Partition function and averages
# ---------------------------------------------------------------------------


def log_partition(h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """ln Z, finite for every beta > 0 (ln Z -> -inf only if eps_0 > 0 and beta -> inf)."""
    spec = _spectrum(h)
    b = as_beta(beta)
    if math.isinf(b):
        if spec.levels[0] != 0.0:
            return -math.inf if spec.levels[0] > 0 else math.inf
        return math.log(float(spec.degeneracies[0]))
    return float(logsumexp(-b * spec.levels, b=spec.degeneracies))


def partition_function(h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """Z = sum g_n e^{-beta eps_n}."""
    return math.exp(log_partition(h, beta))


def average_energy(h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """E = sum p_n eps_n."""
    spec = _spectrum(h)
    return float(np.dot(_level_weights(spec, as_beta(beta)), spec.levels))


def free_energy(h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """F = -ln Z / beta; the ground energy at beta = inf."""
    spec = _spectrum(h)
    b = as_beta(beta)
    if math.isinf(b):
        return float(spec.levels[0])
    return -log_partition(spec, b) / b


def thermal_entropy(h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """S = beta E + ln Z; ln g_0 in the ground-state limit."""
    spec = _spectrum(h)
    b = as_beta(beta)
    if math.isinf(b):
        return math.log(float(spec.degeneracies[0]))
    return b * average_energy(spec, b) + log_partition(spec, b)


# ---------------------------------------------------------------------------
# Out of equilibrium
# ---------------------------------------------------------------------------


def _hamiltonian_matrix(h: SpectrumModel | np.ndarray) -> np.ndarray:
    if isinstance(h, SpectrumModel):
        return h.matrix()
    return np.asarray(h, dtype=np.complex128)


def noneq_free_energy(rho: DensityMatrix | np.ndarray, h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """
    Nonequilibrium free energy tr(rho H) - S(rho)/beta.

    Equals [S(rho || gamma) - ln Z] / beta, so it is minimised by the Gibbs state.
    """
    rho = as_density(rho)
    hm = _hamiltonian_matrix(h)
    if hm.shape != (rho.dim, rho.dim):
        raise ShapeError(f"Hamiltonian of shape {hm.shape} on a state of dimension {rho.dim}")
    b = as_beta(beta)
    energy = float(np.trace(rho.entries @ hm).real)
    if math.isinf(b):
        return energy
    return energy - von_neumann_entropy(rho) / b


def free_energy_gap(rho: DensityMatrix | np.ndarray, h: SpectrumModel | np.ndarray, beta: Beta) -> float:
    """S(rho || gamma) / beta, the free energy stored above equilibrium."""
    b = as_beta(beta)
    hm = _hamiltonian_matrix(h)
    gamma = gibbs_state(hm, b)
    assert isinstance(gamma, DensityMatrix)
    return relative_entropy(as_density(rho), gamma) / b


def isothermal_work(
    levels: Callable[[float], SpectrumModel | np.ndarray],
    beta: Beta,
    lam0: float,
    lam1: float,
) -> float:
    """
    Quasistatic isothermal work to drive the spectrum from lam0 to lam1.

    W = [ln Z(lam0) - ln Z(lam1)] / beta = F(lam1) - F(lam0)
    """
    b = as_beta(beta)
    if math.isinf(b):
        return float(_spectrum(levels(lam1)).levels[0] - _spectrum(levels(lam0)).levels[0])
    return (log_partition(levels(lam0), b) - log_partition(levels(lam1), b)) / b


class HeatWorkSplit(NamedTuple):
    """First-law split of an energy change between two snapshots."""

    work: float
    heat: float
    energy_change: float


def heat_work_split(
    populations: tuple[np.ndarray, np.ndarray],
    energies: tuple[np.ndarray, np.ndarray],
) -> HeatWorkSplit:
    """
    Split dU = sum p d(eps) + sum eps dp between two (populations, energies) snapshots.

    Level shifts at fixed populations are work, population changes at fixed
    levels are heat. Midpoint weights make work + heat equal the energy
    change exactly.
    """
    p0, p1 = (np.asarray(p, dtype=np.float64) for p in populations)
    e0, e1 = (np.asarray(e, dtype=np.float64) for e in energies)
    if not (p0.shape == p1.shape == e0.shape == e1.shape):
        raise ShapeError("populations and energies must share one shape")
    for p in (p0, p1):
        ProbDist(p)
    work = float(np.dot(0.5 * (p0 + p1), e1 - e0))
    heat = float(np.dot(0.5 * (e0 + e1), p1 - p0))
    return HeatWorkSplit(work, heat, float(np.dot(p1, e1) - np.dot(p0, e0)))


def check_beta_range(beta: float) -> float:
    """Validate a finite positive beta for routines that divide by it."""
    b = as_beta(beta)
    if math.isinf(b):
        raise DomainError("a finite inverse temperature is required here")
    return b
