"""
Second-law bookkeeping for heat engines and cyclic processes.

Sign convention: heat is positive when it flows INTO the working system.
"""

import logging
import math
from collections.abc import Sequence
from typing import NamedTuple

from src.common.errors import DomainError

logger = logging.getLogger(__name__)

# Entropy production below this counts as a second-law violation
VIOLATION_TOL = 1e-12


class EfficiencyReport(NamedTuple):
    """Steady-state engine figures of merit."""

    eta: float
    sigma_dot: float
    carnot: float
    identity_residual: float
    violates_second_law: bool


def engine_efficiency(q_dot_h: float, q_dot_c: float, t_h: float, t_c: float) -> EfficiencyReport:
    """
    Efficiency and entropy production rate of a two-bath steady-state engine.

        eta       = 1 + Qc/Qh
        sigma_dot = Qh/Th + Qc/Tc
        eta       = eta_C + (Tc/Qh) sigma_dot    (checked, residual reported)

    Args:
        q_dot_h: Heat current from the hot bath into the engine
        q_dot_c: Heat current from the cold bath into the engine
        t_h: Hot temperature
        t_c: Cold temperature, 0 < t_c <= t_h (equal temperatures give eta_C = 0)

    Returns:
        EfficiencyReport with the Carnot value and a violation flag
    """
    if not (t_h >= t_c > 0):
        raise DomainError(f"need t_h >= t_c > 0, got t_h={t_h!r}, t_c={t_c!r}")
    if q_dot_h == 0:
        raise DomainError(f"efficiency undefined for zero hot heat current (q_dot_c={q_dot_c!r})")

    eta = 1.0 + q_dot_c / q_dot_h
    sigma_dot = q_dot_h / t_h + q_dot_c / t_c
    carnot = 1.0 - t_c / t_h
    residual = abs(eta - (carnot + t_c / q_dot_h * sigma_dot))
    violates = sigma_dot < -VIOLATION_TOL
    if violates:
        logger.warning("negative entropy production %.3e", sigma_dot)
    return EfficiencyReport(eta, sigma_dot, carnot, residual, violates)


class ClausiusReport(NamedTuple):
    """Clausius sum over the baths of one cycle."""

    entropy_flow: float
    entropy_production: float
    violates_second_law: bool


def clausius_entropy_production(heats: Sequence[float], temperatures: Sequence[float]) -> ClausiusReport:
    """
    Clausius inequality for a cyclic process: sum Q_i/T_i <= 0.

    The entropy production of the cycle is minus that sum.
    """
    if len(heats) != len(temperatures) or not heats:
        raise DomainError("need one temperature per heat exchange")
    if any(not (t > 0) or math.isinf(t) for t in temperatures):
        raise DomainError("temperatures must be finite and positive")
    flow = math.fsum(q / t for q, t in zip(heats, temperatures, strict=True))
    return ClausiusReport(flow, -flow, -flow < -VIOLATION_TOL)
