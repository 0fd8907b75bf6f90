"""
System–environment–memory–work (SEMW) entropy chain.

Four subsystems start in a product state and evolve under one energy-preserving
unitary. Subadditivity plus unitary invariance give

    dS_S + dS_E + dS_M + dS_W >= 0

and for a protocol that returns the system (dS_S = 0) and keeps the work
reservoir in a pure state (dS_W = 0), with the environment starting thermal:

    dS_M >= -beta Q_E

The memory pays in entropy for any heat drawn from the environment.
semw_cycle_check() verifies the contract and the inequality and returns a
MemoryLedger with every subsystem's entropy change.
"""

import functools
import logging
import math
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from src.common.ensemble import parallel_map
from src.common.errors import ContractError, DomainError, InvariantError, ShapeError
from src.common.seeding import stream
from src.info_core.entropy import von_neumann_entropy
from src.info_core.states import check_unitary, partial_trace, random_density_matrix, random_unitary, tensor
from src.info_core.thermal import check_beta_range, gibbs_state
from src.info_core.types import DensityMatrix, as_density

logger = logging.getLogger(__name__)

SUBSYSTEMS = ("system", "environment", "memory", "work")

# Tolerances for the protocol contract and for [U, H_total] = 0
CONTRACT_TOL = 1e-8
COMMUTATOR_TOL = 1e-8
BOUND_TOL = 1e-9


class SEMWState(NamedTuple):
    """Initial states of the four subsystems, tensor order S ⊗ E ⊗ M ⊗ W."""

    system: DensityMatrix
    environment: DensityMatrix
    memory: DensityMatrix
    work: DensityMatrix


class MemoryLedger(NamedTuple):
    """Entropy changes (nats) per subsystem, environment heat and the inequality slack."""

    delta_s_system: float
    delta_s_environment: float
    delta_s_memory: float
    delta_s_work: float
    heat_to_environment: float
    slack: float

    @property
    def holds(self) -> bool:
        return self.slack >= -BOUND_TOL

    def to_json(self) -> dict[str, float | bool]:
        payload: dict[str, float | bool] = dict(self._asdict())
        payload["holds"] = self.holds
        return payload


def total_hamiltonian(hamiltonians: Sequence[np.ndarray]) -> np.ndarray:
    """Non-interacting sum H_S ⊗ 1 ⊗ ... + ... + 1 ⊗ ... ⊗ H_W."""
    hs = [np.asarray(h, dtype=np.complex128) for h in hamiltonians]
    dims = [h.shape[0] for h in hs]
    total = np.zeros((int(np.prod(dims)),) * 2, dtype=np.complex128)
    for k, h in enumerate(hs):
        term = np.ones((1, 1), dtype=np.complex128)
        for j, d in enumerate(dims):
            term = np.kron(term, h if j == k else np.eye(d))
        total += term
    return total


def energy_preserving_unitary(h: np.ndarray, rng: np.random.Generator, degeneracy_tol: float = 1e-9) -> np.ndarray:
    """Random unitary commuting with h: Haar-random inside each degenerate eigenspace."""
    energies, vecs = np.linalg.eigh(np.asarray(h, dtype=np.complex128))
    u = np.zeros_like(vecs)
    start = 0
    while start < energies.size:
        stop = start + 1
        while stop < energies.size and energies[stop] - energies[start] < degeneracy_tol:
            stop += 1
        block = random_unitary(stop - start, rng) if stop - start > 1 else np.exp(2j * np.pi * rng.random()) * np.eye(1)
        u[start:stop, start:stop] = block
        start = stop
    return vecs @ u @ vecs.conj().T


def semw_cycle_check(
    initial: SEMWState,
    hamiltonians: Sequence[np.ndarray],
    unitary: np.ndarray,
    beta: float,
) -> MemoryLedger:
    """
    Evolve S ⊗ E ⊗ M ⊗ W and check dS_M >= -beta Q_E.

    Args:
        initial: Product initial state; the environment must be Gibbs at beta
        hamiltonians: Local Hamiltonians (H_S, H_E, H_M, H_W)
        unitary: Joint unitary, must commute with the total Hamiltonian
        beta: Environment inverse temperature

    Returns:
        MemoryLedger; slack = dS_M + beta Q_E

    Raises:
        ContractError: naming the subsystem (or "unitary") whose precondition
            failed: U not energy preserving, environment not thermal, system
            entropy changed, work reservoir not pure before and after
    """
    beta = check_beta_range(beta)
    states = [as_density(s) for s in initial]
    hs = [np.asarray(h, dtype=np.complex128) for h in hamiltonians]
    if len(states) != 4 or len(hs) != 4:
        raise ShapeError("need exactly four subsystems")
    dims = [s.dim for s in states]
    for name, s, h in zip(SUBSYSTEMS, states, hs, strict=True):
        if h.shape != (s.dim, s.dim):
            raise ShapeError(f"{name} Hamiltonian does not match its state")

    u = check_unitary(unitary)
    h_total = total_hamiltonian(hs)
    if u.shape != h_total.shape:
        raise ShapeError(f"unitary of size {u.shape[0]} on a composite of dimension {h_total.shape[0]}")
    if np.max(np.abs(u @ h_total - h_total @ u)) > COMMUTATOR_TOL:
        raise ContractError("unitary does not conserve the total energy", subsystem="unitary")

    gamma_e = gibbs_state(hs[1], beta)
    assert isinstance(gamma_e, DensityMatrix)
    if np.max(np.abs(states[1].entries - gamma_e.entries)) > CONTRACT_TOL:
        raise ContractError("environment does not start in its Gibbs state", subsystem="environment")

    sigma = DensityMatrix(u @ tensor(*states).entries @ u.conj().T)
    finals = [partial_trace(sigma, dims, keep=k) for k in range(4)]
    deltas = [von_neumann_entropy(f) - von_neumann_entropy(s) for s, f in zip(states, finals, strict=True)]

    if abs(deltas[0]) > CONTRACT_TOL:
        raise ContractError(f"system entropy changed by {deltas[0]:.3e}", subsystem="system")
    if von_neumann_entropy(states[3]) > CONTRACT_TOL or von_neumann_entropy(finals[3]) > CONTRACT_TOL:
        raise ContractError("work reservoir is not pure", subsystem="work")

    heat = float(np.trace(hs[1] @ (finals[1].entries - states[1].entries)).real)
    slack = deltas[2] + beta * heat
    ledger = MemoryLedger(deltas[0], deltas[1], deltas[2], deltas[3], heat, slack)
    if not ledger.holds:
        raise InvariantError(f"memory entropy bound violated by {-slack:.3e}")
    logger.info("SEMW cycle: dS_M=%.6g, beta Q_E=%.6g, slack=%.3e", deltas[2], beta * heat, slack)
    return ledger


# ---------------------------------------------------------------------------
# Random cycles
# ---------------------------------------------------------------------------

# Incommensurate gaps keep S and W out of every degenerate block of H_total
SYSTEM_GAP = math.sqrt(2.0)
WORK_GAP = math.pi


def random_semw_setup(
    rng: np.random.Generator,
    beta: float,
    gap: float = 1.0,
) -> tuple[SEMWState, tuple[np.ndarray, ...], np.ndarray]:
    """
    Qubit S ⊗ E ⊗ M ⊗ W that meets the cycle contract by construction.

    E and M share the gap, so the energy-preserving unitary exchanges
    excitations between them only; the system keeps its diagonal populations
    and the work qubit stays in its ground state.
    """
    h_s = np.diag([0.0, SYSTEM_GAP * gap]).astype(np.complex128)
    h_e = np.diag([0.0, gap]).astype(np.complex128)
    h_m = h_e.copy()
    h_w = np.diag([0.0, WORK_GAP * gap]).astype(np.complex128)
    hamiltonians = (h_s, h_e, h_m, h_w)

    gamma_e = gibbs_state(h_e, beta)
    assert isinstance(gamma_e, DensityMatrix)
    initial = SEMWState(
        system=DensityMatrix.diagonal(rng.dirichlet(np.ones(2))),
        environment=gamma_e,
        memory=random_density_matrix(2, rng),
        work=DensityMatrix.basis(2, 0),
    )
    return initial, hamiltonians, energy_preserving_unitary(total_hamiltonian(hamiltonians), rng)


def _semw_trial(index: int, seed: int, beta_range: tuple[float, float]) -> MemoryLedger:
    rng = stream(seed, index)
    beta = float(rng.uniform(*beta_range))
    initial, hamiltonians, unitary = random_semw_setup(rng, beta)
    return semw_cycle_check(initial, hamiltonians, unitary, beta)


def semw_sweep(
    n_trials: int,
    beta_range: tuple[float, float] = (0.1, 10.0),
    seed: int = 0,
    threads: int | None = None,
) -> list[MemoryLedger]:
    """Random contract-respecting cycles; trial i draws from stream(seed, i)."""
    if n_trials < 1:
        raise DomainError("need at least one trial")
    trial = functools.partial(_semw_trial, seed=seed, beta_range=beta_range)
    return parallel_map(trial, range(n_trials), threads=threads, name="semw")
