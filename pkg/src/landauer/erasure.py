"""
Exact system–bath erasure processes.

A system state rho_S meets a bath in its Gibbs state gamma_B, the pair
evolves under a joint unitary U, and every entry of the Ledger follows by
exact linear algebra on sigma_SB = U (rho_S ⊗ gamma_B) U^dagger:

    dS_S  = S(sigma_S) - S(rho_S)
    dS_B  = S(sigma_B) - S(gamma_B)
    dQ_B  = tr[H_B (sigma_B - gamma_B)]
    I     = S(sigma_S) + S(sigma_B) - S(sigma_SB)
    D     = S(sigma_B || gamma_B)

The heat equality beta dQ_B = -dS_S + I + D is then asserted, not assumed.
reeb_wolf_sweep() repeats this over random unitaries, states and
temperatures, in parallel when asked.
"""

import functools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from src.common.ensemble import parallel_map
from src.common.errors import DomainError, InvariantError, ShapeError
from src.common.seeding import stream
from src.info_core.entropy import relative_entropy, von_neumann_entropy
from src.info_core.states import (
    check_unitary,
    partial_trace,
    random_density_matrix,
    random_unitary,
    swap,
    tensor,
)
from src.info_core.thermal import check_beta_range, gibbs_state
from src.info_core.types import DensityMatrix, SpectrumModel, as_density
from src.landauer.ledger import Ledger

logger = logging.getLogger(__name__)

# Exact-diagonalisation paths refuse larger baths
MAX_BATH_DIM = 64

EQUALITY_TOL = 1e-9
BOUND_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ErasureSetup:
    """System state, bath Hamiltonian, bath inverse temperature and joint unitary."""

    system_state: DensityMatrix
    bath_hamiltonian: np.ndarray
    beta: float
    joint_unitary: np.ndarray

    def __post_init__(self) -> None:
        rho = as_density(self.system_state)
        h = self.bath_hamiltonian
        hb = h.matrix() if isinstance(h, SpectrumModel) else np.asarray(h, dtype=np.complex128)
        if hb.ndim != 2 or hb.shape[0] != hb.shape[1]:
            raise ShapeError(f"bath Hamiltonian must be square, got shape {hb.shape}")
        if np.max(np.abs(hb - hb.conj().T)) > 1e-12:
            raise InvariantError("bath Hamiltonian is not Hermitian")
        if hb.shape[0] > MAX_BATH_DIM:
            raise DomainError(f"bath dimension {hb.shape[0]} exceeds {MAX_BATH_DIM}")
        u = check_unitary(self.joint_unitary)
        if u.shape[0] != rho.dim * hb.shape[0]:
            raise ShapeError(f"unitary of size {u.shape[0]} on a {rho.dim} x {hb.shape[0]} composite")
        object.__setattr__(self, "system_state", rho)
        object.__setattr__(self, "bath_hamiltonian", hb)
        object.__setattr__(self, "beta", check_beta_range(self.beta))
        object.__setattr__(self, "joint_unitary", u)

    @property
    def dims(self) -> tuple[int, int]:
        return self.system_state.dim, int(self.bath_hamiltonian.shape[0])


def run_erasure(setup: ErasureSetup) -> Ledger:
    """
    Evolve rho_S ⊗ gamma_B under the joint unitary and book-keep the result.

    Raises:
        InvariantError: if the heat equality misses by more than 1e-9 or the
            Landauer bound beta dQ_B >= -dS_S fails by more than 1e-9
    """
    beta = setup.beta
    hb = setup.bath_hamiltonian
    d_s, d_b = setup.dims

    gamma_b = gibbs_state(hb, beta)
    assert isinstance(gamma_b, DensityMatrix)
    u = setup.joint_unitary
    sigma = DensityMatrix(u @ tensor(setup.system_state, gamma_b).entries @ u.conj().T)
    sigma_s = partial_trace(sigma, (d_s, d_b), keep=0)
    sigma_b = partial_trace(sigma, (d_s, d_b), keep=1)

    s_sigma_s = von_neumann_entropy(sigma_s)
    s_sigma_b = von_neumann_entropy(sigma_b)
    delta_s_system = s_sigma_s - von_neumann_entropy(setup.system_state)
    delta_s_bath = s_sigma_b - von_neumann_entropy(gamma_b)
    heat = float(np.trace(hb @ (sigma_b.entries - gamma_b.entries)).real)
    mutual = max(s_sigma_s + s_sigma_b - von_neumann_entropy(sigma), 0.0)
    rel = max(relative_entropy(sigma_b, gamma_b), 0.0)

    ledger = Ledger(
        delta_s_system=delta_s_system,
        delta_s_bath=delta_s_bath,
        heat_to_bath=heat,
        mutual_info=mutual,
        rel_entropy_bath=rel,
        entropy_production=beta * heat + delta_s_system,
        beta=beta,
    )
    if ledger.residual > EQUALITY_TOL:
        raise InvariantError(f"heat equality residual {ledger.residual:.3e} exceeds {EQUALITY_TOL}")
    if ledger.landauer_margin < -BOUND_TOL:
        raise InvariantError(f"Landauer bound violated by {-ledger.landauer_margin:.3e}")
    return ledger


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def swap_erasure_cost(gap_e: float, beta: float) -> float:
    """
    Heat dumped into a bath qubit when a maximally mixed qubit is swapped with it.

        W = (1/2 - e^{-beta E} / Z) E,   Z = 1 + e^{-beta E}
    """
    if gap_e < 0:
        raise DomainError("gap must be non-negative")
    if gap_e == 0:
        return 0.0
    if math.isinf(beta):
        return 0.5 * gap_e
    excited = 1.0 / (1.0 + math.exp(beta * gap_e))
    return (0.5 - excited) * gap_e


def landauer_minimum(delta_s_system: float, beta: float) -> float:
    """Least heat the bath can receive: -dS_S / beta (ln 2 / beta for a one-bit reset)."""
    return -delta_s_system / check_beta_range(beta)


def swap_setup(gap_e: float, beta: float, system_state: DensityMatrix | None = None) -> ErasureSetup:
    """Qubit SWAP with a bath qubit of gap E, the system maximally mixed by default."""
    state = system_state if system_state is not None else DensityMatrix.maximally_mixed(2)
    return ErasureSetup(state, SpectrumModel.qubit(gap_e).matrix(), beta, swap(2))


# ---------------------------------------------------------------------------
# Random sweep
# ---------------------------------------------------------------------------


class SweepResult(NamedTuple):
    """Outcome of a random-process sweep over the heat equality."""

    ledgers: list[Ledger]
    dims: list[tuple[int, int]]
    max_residual: float
    min_landauer_margin: float


def _random_hamiltonian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix with spectrum inside [0, 1]."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (a + a.conj().T)
    lam = np.linalg.eigvalsh(h)
    span = lam[-1] - lam[0]
    h = (h - lam[0] * np.eye(dim)) / (span if span > 0 else 1.0)
    return 0.5 * (h + h.conj().T)


def _sweep_trial(
    index: int,
    seed: int,
    dims: tuple[tuple[int, int], ...],
    beta_range: tuple[float, float],
) -> tuple[tuple[int, int], Ledger]:
    rng = stream(seed, index)
    d_s, d_b = dims[index % len(dims)]
    beta = float(rng.uniform(*beta_range))
    setup = ErasureSetup(
        system_state=random_density_matrix(d_s, rng),
        bath_hamiltonian=_random_hamiltonian(d_b, rng),
        beta=beta,
        joint_unitary=random_unitary(d_s * d_b, rng),
    )
    return (d_s, d_b), run_erasure(setup)


def reeb_wolf_sweep(
    n_trials: int,
    dims: Sequence[tuple[int, int]] = ((2, 2), (2, 3)),
    beta_range: tuple[float, float] = (0.1, 10.0),
    seed: int = 0,
    threads: int | None = None,
) -> SweepResult:
    """
    Check the heat equality on random processes.

    Trial i draws from stream(seed, i): a random system state, a random bath
    Hamiltonian with spectrum in [0, 1], a Haar unitary on the composite and
    beta uniform in beta_range. Dimension pairs cycle through ``dims``.

    Returns:
        SweepResult with every ledger, the worst residual and the smallest
        Landauer margin beta dQ_B + dS_S
    """
    if n_trials < 1:
        raise DomainError("need at least one trial")
    lo, hi = beta_range
    if not (0 < lo <= hi):
        raise DomainError(f"invalid beta range {beta_range!r}")
    trial = functools.partial(_sweep_trial, seed=seed, dims=tuple(dims), beta_range=(lo, hi))
    results = parallel_map(trial, range(n_trials), threads=threads, name="reeb_wolf")

    ledgers = [ledger for _, ledger in results]
    max_residual = max(ledger.residual for ledger in ledgers)
    min_margin = min(ledger.landauer_margin for ledger in ledgers)
    logger.info("sweep of %d trials: max residual %.3e, min margin %.3e", n_trials, max_residual, min_margin)
    return SweepResult(ledgers, [d for d, _ in results], max_residual, min_margin)
