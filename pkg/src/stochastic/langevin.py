"""
Overdamped Langevin engine with stochastic energetics.

Euler–Maruyama update, force evaluated with the protocol already advanced:

    x_{i+1} = x_i - U'(x_i, t_{i+1}) dt / friction + sqrt(2 kT dt / friction) xi_i

Energetics per step (q is heat ABSORBED by the particle):

    dw_i = U(x_i, t_{i+1}) - U(x_i, t_i)           protocol moves, position fixed
    dq_i = U(x_{i+1}, t_{i+1}) - U(x_i, t_{i+1})   particle moves, protocol fixed

so U(x_N, t_N) - U(x_0, t_0) = sum dw + sum dq holds step by step up to
rounding. The dissipated heat of a trajectory is -q.

Ensembles are split into fixed-size chunks. Chunk j draws from
seeding.stream(seed, j), so results do not depend on the number of workers
or the order in which chunks finish.
"""

import functools
import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from src.common.ensemble import parallel_map
from src.common.errors import DivergenceError, DomainError, InvariantError
from src.common.seeding import chunk_bounds, stream
from src.common.statistics import Moments, merge_all
from src.stochastic.potentials import Harmonic, PotentialSpec

logger = logging.getLogger(__name__)

# dt * max|U''| / friction must stay below this
STABILITY_LIMIT = 0.1

# |x| beyond this many length scales counts as a blow-up
DIVERGENCE_FACTOR = 10.0

DEFAULT_CHUNK = 1000

# Normals are drawn this many steps at a time
NOISE_BLOCK = 512

# Grid resolution for inverse-CDF equilibrium sampling
SAMPLER_GRID = 8001


@dataclass(frozen=True)
class LangevinParams:
    """Bath coupling and discretisation."""

    friction: float = 1.0
    kT: float = 1.0
    dt: float = 1e-3
    n_steps: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.friction > 0):
            raise DomainError("friction must be positive")
        if self.kT < 0:
            raise DomainError("temperature must be non-negative")
        if not (self.dt > 0):
            raise DomainError("time step must be positive")
        if self.n_steps < 1:
            raise DomainError("need at least one step")

    @property
    def duration(self) -> float:
        return self.dt * self.n_steps

    def for_duration(self, duration: float) -> "LangevinParams":
        """Copy covering ``duration`` with the step rounded so that n_steps * dt == duration."""
        if not (duration > 0):
            raise DomainError("duration must be positive")
        n = max(1, round(duration / self.dt))
        return replace(self, n_steps=n, dt=duration / n)

    def check_stability(self, potential: PotentialSpec, coefficients: np.ndarray) -> None:
        ratio = self.dt * potential.max_curvature(coefficients) / self.friction
        if ratio >= STABILITY_LIMIT:
            raise DomainError(f"time step too large: dt |U''|max / friction = {ratio:.3g} >= {STABILITY_LIMIT}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One sampled path with its per-step work and heat."""

    times: np.ndarray
    positions: np.ndarray
    work_increments: np.ndarray
    heat_increments: np.ndarray

    @property
    def work(self) -> float:
        return float(np.sum(self.work_increments))

    @property
    def heat(self) -> float:
        return float(np.sum(self.heat_increments))

    @property
    def dissipated_heat(self) -> float:
        return -self.heat


# ---------------------------------------------------------------------------
# Initial conditions
# ---------------------------------------------------------------------------

InitialCondition = float | Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class EquilibriumSampler:
    """Draws x from exp(-U(x, t0)/kT); exact for a harmonic trap, inverse CDF otherwise."""

    potential: PotentialSpec
    kT: float = 1.0
    t0: float = 0.0

    def __call__(self, rng: np.random.Generator, n: int) -> np.ndarray:
        c = self.potential.coefficients(np.array([self.t0]))[0]
        if isinstance(self.potential, Harmonic):
            if not (c[0] > 0):
                raise DomainError("equilibrium needs a positive stiffness")
            return rng.normal(0.0, np.sqrt(self.kT / c[0]), size=n)

        lo, hi = self.potential.walls or (-5.0 * self.potential.length_scale, 5.0 * self.potential.length_scale)
        grid = np.linspace(lo, hi, SAMPLER_GRID)
        u = self.potential.energy(grid, c)
        density = np.exp(-(u - u.min()) / self.kT)
        cdf = cumulative_trapezoid(density, grid, initial=0.0)
        cdf /= cdf[-1]
        return np.interp(rng.random(n), cdf, grid)


def _initial_positions(x0: InitialCondition, rng: np.random.Generator, n: int) -> np.ndarray:
    if callable(x0):
        return np.asarray(x0(rng, n), dtype=np.float64)
    return np.full(n, float(x0))


# ---------------------------------------------------------------------------
# Integrator
# ---------------------------------------------------------------------------


class ChunkResult(NamedTuple):
    work: np.ndarray
    heat: np.ndarray
    initial: np.ndarray
    final: np.ndarray
    paths: np.ndarray | None


def _integrate(
    potential: PotentialSpec,
    params: LangevinParams,
    x: np.ndarray,
    rng: np.random.Generator,
    record: bool = False,
    step_offset: int = 0,
) -> tuple[ChunkResult, np.ndarray | None, np.ndarray | None]:
    """Advance positions ``x`` through params.n_steps steps; optionally keep every step."""
    n_steps = params.n_steps
    times = np.arange(n_steps + 1) * params.dt
    coeffs = potential.coefficients(times)
    params.check_stability(potential, coeffs)

    mobility = params.dt / params.friction
    noise_scale = np.sqrt(2.0 * params.kT * mobility)
    bound = DIVERGENCE_FACTOR * potential.length_scale
    walls = potential.walls

    x = np.array(x, dtype=np.float64)
    x_start = x.copy()
    n = x.size
    work = np.zeros(n)
    heat = np.zeros(n)
    paths = np.empty((n_steps + 1, n)) if record else None
    dw_all = np.empty((n_steps, n)) if record else None
    dq_all = np.empty((n_steps, n)) if record else None
    if paths is not None:
        paths[0] = x

    u_now = potential.energy(x, coeffs[0])
    noise = np.empty((0, n))
    for i in range(n_steps):
        k = i % NOISE_BLOCK
        if k == 0:
            noise = rng.standard_normal((min(NOISE_BLOCK, n_steps - i), n))
        c_next = coeffs[i + 1]

        u_moved = potential.energy(x, c_next)
        dw = u_moved - u_now
        x = x - potential.gradient(x, c_next) * mobility + noise_scale * noise[k]
        if walls is not None:
            lo, hi = walls
            x = np.where(x > hi, 2.0 * hi - x, x)
            x = np.where(x < lo, 2.0 * lo - x, x)
        if not np.all(np.isfinite(x)) or np.any(np.abs(x) > bound):
            raise DivergenceError(f"trajectory left |x| <= {bound:g} at step {step_offset + i + 1}", step_offset + i + 1)
        u_now = potential.energy(x, c_next)
        dq = u_now - u_moved

        work += dw
        heat += dq
        if paths is not None and dw_all is not None and dq_all is not None:
            paths[i + 1] = x
            dw_all[i] = dw
            dq_all[i] = dq

    result = ChunkResult(work, heat, x_start, x, paths)
    return result, dw_all, dq_all


def simulate(potential: PotentialSpec, params: LangevinParams, x0: InitialCondition = 0.0) -> Trajectory:
    """
    One trajectory, every step recorded. Deterministic in params.seed.

    Raises:
        DivergenceError: if the path leaves the simulation domain
        InvariantError: if the per-step first law fails beyond 1e-9
    """
    rng = stream(params.seed, 0)
    x_init = _initial_positions(x0, rng, 1)
    result, dw, dq = _integrate(potential, params, x_init, rng, record=True)
    assert result.paths is not None and dw is not None and dq is not None

    times = np.arange(params.n_steps + 1) * params.dt
    positions = result.paths[:, 0]
    traj = Trajectory(times, positions, dw[:, 0], dq[:, 0])

    coeffs = potential.coefficients(times)
    du = potential.energy(positions[1:], coeffs[1:].T) - potential.energy(positions[:-1], coeffs[:-1].T)
    if np.max(np.abs(du - traj.work_increments - traj.heat_increments)) > 1e-9:
        raise InvariantError("per-step first law violated")
    return traj


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------


class EnsembleResult(NamedTuple):
    """Per-trajectory totals of an ensemble, in trajectory order."""

    work: np.ndarray
    heat: np.ndarray
    initial_positions: np.ndarray
    final_positions: np.ndarray
    paths: np.ndarray | None

    @property
    def work_moments(self) -> Moments:
        return Moments.of(self.work)

    @property
    def heat_moments(self) -> Moments:
        return Moments.of(self.heat)


def _run_chunk(
    bounds: tuple[int, int],
    potential: PotentialSpec,
    params: LangevinParams,
    x0: InitialCondition,
    chunk_size: int,
    record: bool,
) -> ChunkResult:
    start, stop = bounds
    rng = stream(params.seed, start // chunk_size)
    x_init = _initial_positions(x0, rng, stop - start)
    result, _, _ = _integrate(potential, params, x_init, rng, record=record)
    return result


def simulate_ensemble(
    potential: PotentialSpec,
    params: LangevinParams,
    n_traj: int,
    x0: InitialCondition = 0.0,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
    record: bool = False,
) -> EnsembleResult:
    """
    Run ``n_traj`` independent trajectories, chunk by chunk.

    Args:
        potential: Potential with its protocol
        params: Langevin parameters; params.seed is the master seed
        n_traj: Ensemble size
        x0: Fixed start or a sampler (rng, n) -> positions
        chunk_size: Trajectories per random stream (changing it changes the draws)
        threads: Workers; >1 distributes chunks over Spark
        record: Keep every position (n_steps + 1, n_traj); memory heavy

    Returns:
        EnsembleResult with per-trajectory work and heat in trajectory order
    """
    if n_traj < 1:
        raise DomainError("need at least one trajectory")
    chunks = chunk_bounds(n_traj, chunk_size)
    task = functools.partial(
        _run_chunk, potential=potential, params=params, x0=x0, chunk_size=chunk_size, record=record
    )
    parts = parallel_map(task, chunks, threads=threads, name="langevin")

    work = np.concatenate([p.work for p in parts])
    heat = np.concatenate([p.heat for p in parts])
    merged = merge_all(Moments.of(p.work) for p in parts)
    logger.info(
        "ensemble of %d trajectories over %d chunks: <W> = %.6g +- %.2g",
        n_traj,
        len(chunks),
        merged.mean,
        merged.std_error,
    )
    paths = np.concatenate([p.paths for p in parts], axis=1) if record else None
    return EnsembleResult(
        work,
        heat,
        np.concatenate([p.initial for p in parts]),
        np.concatenate([p.final for p in parts]),
        paths,
    )
