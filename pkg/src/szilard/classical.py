"""
Single-particle (classical) Szilard engine.

With N = 1 and the wall in the middle the quantum cycle reduces to

    W_ins = ln 2 / beta - Delta,   W_exp = Delta,   W_rem = 0
    Delta = ln[z(L) / z(L/2)] / beta

so insertion costs work at low temperature and the full ln 2 / beta is
recovered by expansion only at high temperature. The textbook gas-piston
value comes from the isothermal integral of p = kT / V.
"""

import math
from typing import NamedTuple

from scipy.integrate import quad

from src.common.errors import DomainError, InvariantError
from src.info_core.entropy import LN2
from src.szilard.box import BoxSpec, WallConfig, log_segment_partition
from src.szilard.cycle import run_cycle

STAGE_TOL = 1e-9


class StageDecomposition(NamedTuple):
    w_ins: float
    w_exp: float
    w_rem: float
    delta: float


def classical_stage_decomposition(box: BoxSpec, beta: float) -> StageDecomposition:
    """Stage works of the N = 1 cycle with the wall at L/2, plus Delta."""
    if box.n_particles != 1:
        raise DomainError("the classical decomposition needs exactly one particle")
    report = run_cycle(box, WallConfig(0.5 * box.length), beta)
    delta = (
        log_segment_partition(box, box.length, 1, beta) - log_segment_partition(box, 0.5 * box.length, 1, beta)
    ) / beta

    if abs(report.w_rem) * beta > STAGE_TOL:
        raise InvariantError(f"removal work {report.w_rem!r} should vanish")
    if abs((report.w_ins + report.w_exp) * beta - LN2) > STAGE_TOL:
        raise InvariantError("insertion plus expansion does not add up to ln 2 / beta")
    if abs((report.w_ins - (LN2 / beta - delta)) * beta) > STAGE_TOL:
        raise InvariantError("insertion work disagrees with ln 2 / beta - Delta")
    return StageDecomposition(report.w_ins, report.w_exp, report.w_rem, delta)


def classical_szilard_work(beta: float, volume_fraction: float = 0.5) -> float:
    """
    Work done ON an ideal one-particle gas expanding isothermally from f V to V.

    -integral p dV with p = 1 / (beta V); -ln 2 / beta for the half-box start.
    """
    if not (beta > 0) or math.isinf(beta):
        raise DomainError("a finite positive beta is required")
    if not (0.0 < volume_fraction <= 1.0):
        raise DomainError("volume fraction must lie in (0, 1]")
    work, _ = quad(lambda v: 1.0 / (beta * v), volume_fraction, 1.0, epsabs=0.0, epsrel=1e-13)
    return -float(work)
