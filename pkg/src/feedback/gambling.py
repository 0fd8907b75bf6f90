"""
Gambling demon: work statistics at stopping times of a driven two-state system.

The system has states x in {0, 1} with energies 0 and lambda(t). Jumps follow
Fermi rates with total rate Gamma,

    0 -> 1:  Gamma f(lambda),   1 -> 0:  Gamma (1 - f(lambda)),   f = 1 / (1 + exp(beta lambda))

so every lambda has the equilibrium pi_lambda(1) = f(lambda). The protocol is
discretised on a grid t_k = k tau / N. Step k first switches the gap from
lambda_k to lambda_{k+1} (work x_k (lambda_{k+1} - lambda_k)), then relaxes the
state for tau / N with the exact two-state propagator at lambda_{k+1}.

Densities:
    forward  rho(x, t_k)          from pi_{lambda_0}, forward protocol
    reverse  rho~(x, tau - t_k)   from pi_{lambda_N}, time-reversed protocol

A gambler stops each trajectory at a stopping time T <= tau. With the
stochastic distinguishability delta = ln[rho(x_T, T) / rho~(x_T, tau - T)] and
the equilibrium free-energy change dF = F(lambda_T) - F(lambda_0),

    < exp(-beta (W - dF_neq) - delta) >_T = 1,
    dF_neq = dF + kT ln[rho(x_T, T) / pi_{lambda_T}(x_T)]

holds exactly for the sampled chain: the weight inside the average reduces to
exp(-beta (W - dF)) rho~ / pi, a martingale of the discrete process. Jensen's
inequality then gives <W - dF_neq + kT delta>_T >= 0, while the plain
<W>_T - <dF>_T may be negative for a clever rule.
"""

import enum
import functools
import logging
import math
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np
from scipy.special import expit

from src.common.ensemble import parallel_map
from src.common.errors import DomainError
from src.common.seeding import chunk_bounds, stream
from src.common.statistics import Moments, jackknife
from src.stochastic.potentials import Schedule

logger = logging.getLogger(__name__)

DEFAULT_GRID = 1000
DEFAULT_CHUNK = 10_000

# Reverse densities below this are treated as zero and the path is excluded
DENSITY_FLOOR = 1e-300

DELTA_F_CONVENTION = "equilibrium: F(lambda(T)) - F(lambda(0))"


class StoppingKind(enum.Enum):
    WORK_THRESHOLD = "work_threshold"
    DEADLINE_ONLY = "deadline_only"


@dataclass(frozen=True)
class StoppingRule:
    """Stop at the first grid time with W >= threshold, or at tau."""

    kind: StoppingKind
    tau: float
    threshold: float = math.inf

    def __post_init__(self) -> None:
        if not (self.tau > 0):
            raise DomainError("horizon tau must be positive")
        if self.kind is StoppingKind.WORK_THRESHOLD and not math.isfinite(self.threshold):
            raise DomainError("work_threshold rule needs a finite threshold")

    @classmethod
    def deadline(cls, tau: float) -> "StoppingRule":
        return cls(StoppingKind.DEADLINE_ONLY, tau)

    @classmethod
    def work_threshold(cls, threshold: float, tau: float) -> "StoppingRule":
        return cls(StoppingKind.WORK_THRESHOLD, tau, threshold)


@dataclass(frozen=True, eq=False)
class TwoStateProtocol:
    """Gap schedule lambda(t) and total jump rate Gamma."""

    gap: Schedule
    rate: float = 1.0

    def __post_init__(self) -> None:
        if not (self.rate > 0):
            raise DomainError("jump rate must be positive")

    @classmethod
    def linear(cls, start: float, stop: float, tau: float, rate: float = 1.0) -> "TwoStateProtocol":
        return cls(Schedule.ramp(start, stop, 0.0, tau), rate)

    @classmethod
    def static(cls, gap: float, rate: float = 1.0) -> "TwoStateProtocol":
        return cls(Schedule.constant(gap), rate)


@dataclass(frozen=True)
class GamblingParams:
    kT: float = 1.0
    n_grid: int = DEFAULT_GRID
    seed: int = 0
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self) -> None:
        if not (self.kT > 0):
            raise DomainError("temperature must be positive")
        if self.n_grid < 1:
            raise DomainError("need at least one grid step")
        if self.chunk_size < 1:
            raise DomainError("chunk size must be positive")


class DensityTables(NamedTuple):
    """Grid quantities shared read-only by every chunk; index k is time t_k."""

    gaps: np.ndarray
    pi_excited: np.ndarray
    forward_excited: np.ndarray
    reverse_excited: np.ndarray
    free_energy: np.ndarray
    decay: float


def equilibrium_free_energy(gap: np.ndarray | float, kT: float) -> np.ndarray:
    """F(lambda) = -kT ln(1 + exp(-lambda / kT))."""
    return -kT * np.logaddexp(0.0, -np.asarray(gap, dtype=np.float64) / kT)


def _relax(p_excited: float, pi_excited: float, decay: float) -> float:
    return pi_excited + (p_excited - pi_excited) * decay


def density_tables(protocol: TwoStateProtocol, tau: float, params: GamblingParams) -> DensityTables:
    """Forward and reverse occupation of the excited state on the grid."""
    n = params.n_grid
    gaps = protocol.gap(np.linspace(0.0, tau, n + 1))
    pi = expit(-gaps / params.kT)
    decay = math.exp(-protocol.rate * tau / n)

    forward = np.empty(n + 1)
    forward[0] = pi[0]
    for k in range(n):
        forward[k + 1] = _relax(forward[k], pi[k + 1], decay)

    # reverse[j] is rho~ at reversed time t_j, which pairs with forward index N - j;
    # the reversed step relaxes at lambda_{N-j} before switching
    reverse = np.empty(n + 1)
    reverse[0] = pi[n]
    for j in range(n):
        reverse[j + 1] = _relax(reverse[j], pi[n - j], decay)

    return DensityTables(
        gaps=gaps,
        pi_excited=pi,
        forward_excited=forward,
        reverse_excited=reverse[::-1].copy(),
        free_energy=equilibrium_free_energy(gaps, params.kT),
        decay=decay,
    )


class StoppedSample(NamedTuple):
    work: np.ndarray
    stop_index: np.ndarray
    state: np.ndarray


def _sample_chunk(
    bounds: tuple[int, int],
    tables: DensityTables,
    rule: StoppingRule,
    seed: int,
    chunk_size: int,
) -> StoppedSample:
    start, stop = bounds
    size = stop - start
    rng = stream(seed, start // chunk_size)
    n = tables.gaps.size - 1
    threshold = rule.threshold if rule.kind is StoppingKind.WORK_THRESHOLD else math.inf

    x = rng.random(size) < tables.pi_excited[0]
    work = np.zeros(size)
    active = np.ones(size, dtype=bool)
    stop_index = np.full(size, n, dtype=np.int64)
    stop_work = np.zeros(size)
    stop_state = np.zeros(size, dtype=bool)

    for k in range(n + 1):
        hit = active & (work >= threshold) if k < n else active
        if np.any(hit):
            stop_index[hit] = k
            stop_work[hit] = work[hit]
            stop_state[hit] = x[hit]
            active &= ~hit
        if k == n or not np.any(active):
            break
        work += x * (tables.gaps[k + 1] - tables.gaps[k])
        p_excited = tables.pi_excited[k + 1] + (x - tables.pi_excited[k + 1]) * tables.decay
        x = rng.random(size) < p_excited

    return StoppedSample(stop_work, stop_index, stop_state)


class GamblingReport(NamedTuple):
    """Averages over one stopped ensemble; energies in units of kT when kT = 1."""

    mean_w_stopped: float
    w_se: float
    mean_df_stopped: float
    df_se: float
    mean_delta: float
    delta_se: float
    mean_df_noneq_stopped: float
    ft_estimator: float
    ft_se: float
    margin: float
    margin_se: float
    equilibrium_margin: float
    equilibrium_margin_se: float
    mean_stopping_time: float
    n_traj: int
    n_excluded: int

    @property
    def ft_holds(self) -> bool:
        return abs(self.ft_estimator - 1.0) <= 3.0 * self.ft_se

    @property
    def inequality_holds(self) -> bool:
        """<W>_T - <dF_neq>_T + kT <delta>_T >= -3 SE."""
        return self.margin >= -3.0 * self.margin_se

    @property
    def extracts_more_than_invested(self) -> bool:
        """<W>_T < <dF>_T with the equilibrium free energy."""
        return self.equilibrium_margin < 0.0

    def to_json(self) -> dict[str, Any]:
        payload = dict(self._asdict())
        payload["ft_holds"] = self.ft_holds
        payload["inequality_holds"] = self.inequality_holds
        payload["extracts_more_than_invested"] = self.extracts_more_than_invested
        payload["delta_f_convention"] = DELTA_F_CONVENTION
        return payload


def _occupation(excited: np.ndarray, index: np.ndarray, state: np.ndarray) -> np.ndarray:
    p = excited[index]
    return np.where(state, p, 1.0 - p)


def gambling_demon(
    protocol: TwoStateProtocol,
    params: GamblingParams,
    rule: StoppingRule,
    n_traj: int,
    threads: int | None = None,
) -> GamblingReport:
    """
    Sample ``n_traj`` stopped trajectories and evaluate the gambling ledger.

    Args:
        protocol: Gap schedule over [0, rule.tau] and jump rate
        params: Temperature, grid, seed and chunking
        rule: Stopping rule with horizon tau
        n_traj: Ensemble size (>= 2)
        threads: Workers for the chunks

    Returns:
        GamblingReport; trajectories whose reverse density underflows are
        excluded and counted in n_excluded
    """
    if n_traj < 2:
        raise DomainError("need at least two trajectories")
    kT = params.kT
    tables = density_tables(protocol, rule.tau, params)
    task = functools.partial(
        _sample_chunk, tables=tables, rule=rule, seed=params.seed, chunk_size=params.chunk_size
    )
    parts = parallel_map(task, chunk_bounds(n_traj, params.chunk_size), threads=threads, name="gambling")
    work = np.concatenate([p.work for p in parts])
    index = np.concatenate([p.stop_index for p in parts])
    state = np.concatenate([p.state for p in parts])

    rho = _occupation(tables.forward_excited, index, state)
    rho_rev = _occupation(tables.reverse_excited, index, state)
    pi = _occupation(tables.pi_excited, index, state)
    keep = rho_rev >= DENSITY_FLOOR
    n_excluded = int(np.count_nonzero(~keep))
    if n_excluded:
        logger.warning("excluding %d of %d paths with reverse density below %g", n_excluded, n_traj, DENSITY_FLOOR)
    if np.count_nonzero(keep) < 2:
        raise DomainError("fewer than two usable trajectories")

    work, index, rho, rho_rev, pi = work[keep], index[keep], rho[keep], rho_rev[keep], pi[keep]
    delta_f = tables.free_energy[index] - tables.free_energy[0]
    delta = np.log(rho) - np.log(rho_rev)
    delta_f_noneq = delta_f + kT * (np.log(rho) - np.log(pi))
    dissipation = (work - delta_f) / kT
    weight = np.exp(-dissipation + np.log(rho_rev) - np.log(pi))

    w = Moments.of(work)
    df = Moments.of(delta_f)
    dl = Moments.of(delta)
    ft, ft_se = jackknife(weight)
    margin = Moments.of(work - delta_f_noneq + kT * delta)
    eq_margin = Moments.of(work - delta_f)
    mean_time = float(np.mean(index)) * rule.tau / params.n_grid

    report = GamblingReport(
        mean_w_stopped=w.mean,
        w_se=w.std_error,
        mean_df_stopped=df.mean,
        df_se=df.std_error,
        mean_delta=dl.mean,
        delta_se=dl.std_error,
        mean_df_noneq_stopped=float(np.mean(delta_f_noneq)),
        ft_estimator=ft,
        ft_se=ft_se,
        margin=margin.mean,
        margin_se=margin.std_error,
        equilibrium_margin=eq_margin.mean,
        equilibrium_margin_se=eq_margin.std_error,
        mean_stopping_time=mean_time,
        n_traj=int(work.size),
        n_excluded=n_excluded,
    )
    logger.info(
        "gambling %s: <W>=%.4f <dF>=%.4f <delta>=%.4f FT=%.4f +- %.4f",
        rule.kind.value,
        report.mean_w_stopped,
        report.mean_df_stopped,
        report.mean_delta,
        report.ft_estimator,
        report.ft_se,
    )
    return report
