"""
Information ratchet on a staircase.

A particle hops on the levels n of a staircase with energy n * dE. Up and
down jumps obey detailed balance, rate_up / rate_down = exp(-dE / kT), so
left alone the particle drifts downhill. A controller measures the height
above its block at regular ticks and moves the block up to the recorded
level; the block forbids jumps below it. Every tick stores dE * M of free
energy, paid for with the information I(Y:M) of that measurement:

    dE <M>  <=  kT I(Y:M)

Feedback modes:
    feedback_period None   no controller, plain downhill diffusion
    feedback_period 0      measure after every jump
    feedback_period t > 0  measure every t time units

Algorithm: Gillespie simulation of a single long trajectory. The offsets Y
seen at the ticks give the empirical prior used for I(Y:M).
"""

import logging
import math
from typing import Any, NamedTuple

import numpy as np

from src.common.errors import DomainError
from src.common.seeding import stream
from src.common.statistics import Moments
from src.feedback.measurement import MeasurementModel, undershoot_measurement
from src.info_core.types import ProbDist

logger = logging.getLogger(__name__)

# Statistics window without a controller
FREE_WINDOW = 1.0

DETAILED_BALANCE_TOL = 1e-9

# Offsets the default channel can represent
DEFAULT_OFFSETS = 64


def detailed_balance_rates(step_energy: float, kT: float = 1.0, down: float = 1.0) -> tuple[float, float]:
    """(rate_up, rate_down) with rate_up / rate_down = exp(-step_energy / kT)."""
    if not (kT > 0 and down > 0):
        raise DomainError("temperature and base rate must be positive")
    return down * math.exp(-step_energy / kT), down


class StaircaseReport(NamedTuple):
    mean_velocity: float
    velocity_se: float
    gain_per_tick: float
    gain_se: float
    information_per_tick: float
    bound: float
    bound_holds: bool | None
    monotone: bool
    n_ticks: int
    levels: np.ndarray

    def to_json(self) -> dict[str, Any]:
        payload = self._asdict()
        payload.pop("levels")
        payload["final_level"] = int(self.levels[-1]) if self.levels.size else 0
        return payload


def _measure(meas: MeasurementModel, cdf: np.ndarray, offset: int, rng: np.random.Generator) -> int:
    y = min(offset, meas.n_states - 1)
    return int(np.searchsorted(cdf[:, y], rng.random(), side="right"))


def staircase_ratchet(
    step_energy: float,
    rates: tuple[float, float],
    feedback_period: float | None,
    meas: MeasurementModel | None,
    n_steps: int,
    seed: int = 0,
    kT: float = 1.0,
) -> StaircaseReport:
    """
    Simulate the staircase for ``n_steps`` ticks (jumps when measuring after every jump).

    Args:
        step_energy: Energy of one step up
        rates: (rate_up, rate_down), in detailed balance at kT
        feedback_period: Time between measurements; 0 measures after every jump, None disables feedback
        meas: Channel p(m|y) over offsets above the block; defaults to a perfect reading
        n_steps: Number of ticks
        seed: Master seed (stream 0)
        kT: Bath temperature

    Returns:
        StaircaseReport; levels holds the particle level at the end of every tick
    """
    rate_up, rate_down = rates
    if not (rate_up > 0 and rate_down > 0):
        raise DomainError("jump rates must be positive")
    if abs(math.log(rate_up / rate_down) + step_energy / kT) > DETAILED_BALANCE_TOL:
        raise DomainError("rates violate detailed balance: rate_up / rate_down != exp(-step_energy / kT)")
    if n_steps < 2:
        raise DomainError("need at least two ticks")
    if feedback_period is not None and feedback_period < 0:
        raise DomainError("feedback period must be non-negative")

    controlled = feedback_period is not None
    if meas is None:
        meas = undershoot_measurement(DEFAULT_OFFSETS, 0.0)
    cdf = np.cumsum(meas.conditional, axis=0)
    cdf[-1, :] = 1.0
    window = FREE_WINDOW if feedback_period is None else feedback_period
    every_jump = controlled and window == 0

    rng = stream(seed, 0)
    level = 0
    block = 0
    elapsed = 0.0
    displacement = np.zeros(n_steps)
    gains = np.zeros(n_steps)
    levels = np.zeros(n_steps, dtype=np.int64)
    offsets = np.zeros(n_steps, dtype=np.int64)

    for tick in range(n_steps):
        start = level
        t = 0.0
        while True:
            can_descend = not controlled or level > block
            total = rate_up + (rate_down if can_descend else 0.0)
            wait = rng.exponential(1.0 / total)
            if not every_jump and t + wait > window:
                t = window
                break
            t += wait
            level += 1 if rng.random() * total < rate_up else -1
            if every_jump:
                break
        if controlled:
            offset = level - block
            m = _measure(meas, cdf, offset, rng)
            offsets[tick] = offset
            gains[tick] = step_energy * m
            block += m
        displacement[tick] = level - start
        levels[tick] = level
        elapsed += t

    velocity = float(np.sum(displacement)) / elapsed
    mean_dwell = elapsed / n_steps
    velocity_se = Moments.of(displacement).std_error / mean_dwell

    information = 0.0
    gain = Moments.of(gains)
    if controlled:
        clipped = np.minimum(offsets, meas.n_states - 1)
        prior = ProbDist.normalized(np.bincount(clipped, minlength=meas.n_states).astype(np.float64))
        information = max(meas.mutual_information(prior), 0.0)
    bound = kT * information
    gain_se = gain.std_error if gain.count > 1 else 0.0
    # Jump-triggered measurement also reads the jump times, which I(Y:M) does not count
    holds = None if every_jump or not controlled else bool(gain.mean <= bound + 3.0 * gain_se)
    monotone = bool(np.all(np.diff(levels) >= 0))

    logger.info(
        "staircase dE=%.3g period=%s: v=%.4g +- %.2g, gain/tick=%.4g, kT I=%.4g",
        step_energy,
        feedback_period,
        velocity,
        velocity_se,
        gain.mean,
        bound,
    )
    if holds is False:
        logger.warning("gain per tick %.4g exceeds kT I = %.4g by more than 3 SE", gain.mean, bound)
    return StaircaseReport(
        mean_velocity=velocity,
        velocity_se=velocity_se,
        gain_per_tick=gain.mean,
        gain_se=gain_se,
        information_per_tick=information,
        bound=bound,
        bound_holds=holds,
        monotone=monotone,
        n_ticks=n_steps,
        levels=levels,
    )
