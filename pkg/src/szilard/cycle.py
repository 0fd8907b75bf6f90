"""
Quantum Szilard cycle: insert a wall, measure, expand, remove.

Works are EXTRACTED works (positive = delivered by the gas):

    W_ins = [ln Z(l) - ln Z(L)] / beta
    W_exp = sum_m p_m [ln Z_m(l_eq^m) - ln Z_m(l)] / beta
    W_rem = sum_m p_m [ln Z(L) - ln Z(l_eq^m)] / beta
    W_tot = -sum_m p_m ln(p_m / p*_m) / beta,   p*_m = Z_m(l_eq^m) / Z(l_eq^m)

run_cycle() computes the three stages and the closed form independently and
refuses to return if they disagree.
"""

import functools
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import logsumexp

from src.common.ensemble import parallel_map
from src.common.errors import InvariantError
from src.info_core.types import ProbDist
from src.szilard.box import (
    BoxSpec,
    Statistics,
    WallConfig,
    equilibrium_wall,
    log_box_partition,
    log_sector_at_equilibrium,
    log_sector_partition,
    reduced_beta,
)

logger = logging.getLogger(__name__)

STAGE_SUM_TOL = 1e-9
NONNEG_TOL = 1e-10

SWEEP_COLUMNS = ("N", "statistics", "l_over_L", "beta_eps1", "W_ins", "W_exp", "W_rem", "W_tot")

# Total work in units of 1/beta for the textbook limits
GOLDEN_TOTAL_WORK = {
    "single_particle": math.log(2.0),
    "boson_pair_low_t": 2.0 / 3.0 * math.log(3.0),
    "fermion_pair_low_t": 0.0,
    "pair_high_t": math.log(2.0),
}


@dataclass(frozen=True, eq=False)
class SzilardReport:
    """Stage works (energy units), outcome statistics and wall equilibria of one cycle."""

    w_ins: float
    w_exp: float
    w_rem: float
    w_tot: float
    p_m: ProbDist
    p_star_m: np.ndarray
    l_eq: np.ndarray
    boundary: np.ndarray
    beta: float

    @property
    def stage_sum(self) -> float:
        return self.w_ins + self.w_exp + self.w_rem

    @property
    def relative_entropy_form(self) -> float:
        """-sum p_m ln(p_m / p*_m) / beta, recomputed from the stored distributions."""
        p = self.p_m.weights
        mask = p > 0
        return float(-np.sum(p[mask] * np.log(p[mask] / self.p_star_m[mask]))) / self.beta

    def in_units_of_kt(self) -> tuple[float, float, float, float]:
        """(W_ins, W_exp, W_rem, W_tot) multiplied by beta."""
        b = self.beta
        return b * self.w_ins, b * self.w_exp, b * self.w_rem, b * self.w_tot

    def to_json(self) -> dict[str, Any]:
        return {
            "w_ins": self.w_ins,
            "w_exp": self.w_exp,
            "w_rem": self.w_rem,
            "w_tot": self.w_tot,
            "p_m": self.p_m.weights.tolist(),
            "p_star_m": self.p_star_m.tolist(),
            "l_eq": self.l_eq.tolist(),
            "boundary": self.boundary.tolist(),
            "beta": self.beta,
        }


def run_cycle(box: BoxSpec, wall: WallConfig, beta: float) -> SzilardReport:
    """
    Run the four-stage cycle with the wall inserted at ``wall.position``.

    Raises:
        TruncationError: if box.n_max is too small at this beta
        InvariantError: if the stage sum and the closed form differ by more
            than 1e-9, or W_tot < -1e-10
    """
    wall.check(box)
    box.check_truncation(beta)
    n = box.n_particles

    log_z_box = log_box_partition(box, beta)
    log_zm = np.array([log_sector_partition(box, wall.position, m, beta) for m in range(n + 1)])
    log_z_wall = float(logsumexp(log_zm))
    p = np.exp(log_zm - log_z_wall)

    equilibria = [equilibrium_wall(box, beta, m) for m in range(n + 1)]
    at_eq = [log_sector_at_equilibrium(box, beta, m, eq) for m, eq in enumerate(equilibria)]
    log_zm_eq = np.array([zm for zm, _ in at_eq])
    log_z_eq = np.array([z for _, z in at_eq])
    p_star = np.exp(log_zm_eq - log_z_eq)

    w_ins = (log_z_wall - log_z_box) / beta
    w_exp = float(np.dot(p, log_zm_eq - log_zm)) / beta
    w_rem = float(np.dot(p, log_z_box - log_z_eq)) / beta

    mask = p > 0
    # ln p_m - ln p*_m straight from the logs, no division of tiny numbers
    log_ratio = (log_zm - log_z_wall) - (log_zm_eq - log_z_eq)
    w_tot = float(-np.sum(p[mask] * log_ratio[mask])) / beta

    stage_sum = w_ins + w_exp + w_rem
    scale = max(1.0, abs(w_tot) * beta)
    if abs(stage_sum - w_tot) * beta > STAGE_SUM_TOL * scale:
        raise InvariantError(f"stage sum {stage_sum!r} differs from closed form {w_tot!r}")
    if w_tot * beta < -NONNEG_TOL:
        raise InvariantError(f"negative total work {w_tot!r}")

    return SzilardReport(
        w_ins=w_ins,
        w_exp=w_exp,
        w_rem=w_rem,
        w_tot=w_tot,
        p_m=ProbDist.normalized(p),
        p_star_m=p_star,
        l_eq=np.array([eq.position for eq in equilibria]),
        boundary=np.array([eq.boundary for eq in equilibria]),
        beta=beta,
    )


# ---------------------------------------------------------------------------
# Sweep table
# ---------------------------------------------------------------------------


def _sweep_point(point: tuple[int, str, float, float], length: float, mass: float) -> dict[str, Any]:
    n, stats, l_over_l, beta_eps1 = point
    box = BoxSpec(length, mass, n, Statistics(stats))
    beta = beta_eps1 / box.ground_energy()
    box = box.with_cutoff(beta)
    report = run_cycle(box, WallConfig(l_over_l * length), beta)
    w_ins, w_exp, w_rem, w_tot = report.in_units_of_kt()
    return {
        "N": n,
        "statistics": box.statistics.value,
        "l_over_L": l_over_l,
        "beta_eps1": reduced_beta(box, beta),
        "W_ins": w_ins,
        "W_exp": w_exp,
        "W_rem": w_rem,
        "W_tot": w_tot,
    }


def sweep_rows(
    n_particles: Iterable[int],
    statistics: Iterable[Statistics | str],
    wall_fractions: Iterable[float],
    beta_eps1: Iterable[float],
    length: float = 1.0,
    mass: float = 1.0,
    threads: int | None = None,
) -> list[dict[str, Any]]:
    """
    One row per (N, statistics, l/L, beta eps_1(L)) point, works in units of 1/beta.

    Rows come out in the nested order of the arguments.
    """
    stats = [Statistics(s).value for s in statistics]
    fractions = [float(f) for f in wall_fractions]
    betas = [float(b) for b in beta_eps1]
    points = [(int(n), s, f, b) for n in n_particles for s in stats for f in fractions for b in betas]
    task = functools.partial(_sweep_point, length=length, mass=mass)
    rows = parallel_map(task, points, threads=threads, name="szilard")
    logger.info("szilard sweep: %d points", len(rows))
    return rows

