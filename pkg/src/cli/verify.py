"""
Acceptance suite: every headline result of the library as a named criterion.

Each criterion runs its experiment and returns a list of checks
(label, measured value, comparison, limit). verify() runs all of them and
prints PASS/FAIL per criterion with the measured values.

--quick shrinks ensemble sizes so the whole suite runs in about a minute.
--inject-fault <criterion> replaces the first limit of that criterion with
an unsatisfiable one; the suite must then report exactly that failure.
All randomness comes from the fixed seed, so two runs print the same values.
"""

import logging
import math
import operator
import time
from collections.abc import Callable
from dataclasses import dataclass, replace
from functools import cache
from typing import Any

import numpy as np

from src.common.errors import ConfigError
from src.common.seeding import stream
from src.feedback.gambling import GamblingParams, StoppingRule, TwoStateProtocol, gambling_demon
from src.feedback.ledger import bennett_ledger, szilard_cycle_ledger
from src.feedback.measurement import binary_symmetric_measurement, measurement_gain, perfect_measurement
from src.info_core.entropy import (
    LN2,
    mutual_information_identities,
    mutual_information_quantum,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from src.info_core.states import evolve, random_density_matrix, random_joint, random_unitary, tensor
from src.info_core.types import DensityMatrix, ProbDist
from src.landauer.bounds import (
    HeatCapacityModel,
    distillation_erasure_cost,
    finite_size_bounds,
    phonon_bit_erasure_heat,
    single_shot_battery_bound,
    zero_temperature_bound,
)
from src.landauer.erasure import SweepResult, reeb_wolf_sweep
from src.landauer.semw import semw_sweep
from src.stochastic.erasure import MIN_SUCCESS_SAMPLES, erasure_sweep
from src.stochastic.jarzynski import ramp_check
from src.stochastic.langevin import LangevinParams
from src.szilard.cycle import sweep_rows

logger = logging.getLogger(__name__)

VERIFY_SEED = 20240601

OPS: dict[str, Callable[[float, float], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Check:
    label: str
    value: float
    op: str
    limit: float

    @property
    def passed(self) -> bool:
        return bool(OPS[self.op](self.value, self.limit))

    def impossible(self) -> "Check":
        return replace(self, limit=-math.inf if self.op in ("<", "<=") else math.inf)

    def describe(self) -> str:
        return f"{self.label}={self.value:.6g} {self.op} {self.limit:.6g}"


@dataclass(frozen=True)
class CriterionResult:
    name: str
    checks: tuple[Check, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [
                {"label": c.label, "value": c.value, "op": c.op, "limit": c.limit, "passed": c.passed}
                for c in self.checks
            ],
            "seconds": self.seconds,
        }


@dataclass(frozen=True)
class VerifyReport:
    results: tuple[CriterionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def to_json(self) -> dict[str, Any]:
        return {"passed": self.passed, "criteria": [r.to_json() for r in self.results]}


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------


@cache
def _random_processes(n_trials: int, seed: int) -> SweepResult:
    return reeb_wolf_sweep(n_trials, seed=seed)


def check_reeb_wolf(quick: bool, threads: int | None) -> list[Check]:
    sweep = _random_processes(100 if quick else 500, VERIFY_SEED)
    return [Check("max_residual", sweep.max_residual, "<", 1e-9)]


def check_landauer_bound(quick: bool, threads: int | None) -> list[Check]:
    sweep = _random_processes(100 if quick else 500, VERIFY_SEED)
    return [Check("min_landauer_margin", sweep.min_landauer_margin, ">=", -1e-9)]


def check_semw(quick: bool, threads: int | None) -> list[Check]:
    ledgers = semw_sweep(100 if quick else 500, seed=VERIFY_SEED, threads=threads)
    return [Check("min_memory_slack", min(ledger.slack for ledger in ledgers), ">=", -1e-9)]


def check_szilard_golden(quick: bool, threads: int | None) -> list[Check]:
    single = sweep_rows([1], ["boltzmann"], [0.5], [1.0])[0]["W_tot"]
    boson_cold = sweep_rows([2], ["boson"], [0.5], [30.0])[0]["W_tot"]
    fermion_cold = sweep_rows([2], ["fermion"], [0.5], [30.0])[0]["W_tot"]
    hot = sweep_rows([2], ["boson", "fermion"], [0.5], [1e-3])
    boson_target = 2.0 / 3.0 * math.log(3.0)
    return [
        Check("N1_relative_error", abs(single - LN2) / LN2, "<", 1e-6),
        Check("boson_cold_relative_error", abs(boson_cold - boson_target) / boson_target, "<", 0.01),
        Check("fermion_cold_W_tot", fermion_cold, "<", 1e-3),
        Check("hot_worst_relative_error", max(abs(r["W_tot"] - LN2) / LN2 for r in hot), "<", 0.02),
    ]


def check_szilard_stages(quick: bool, threads: int | None) -> list[Check]:
    fractions = [0.1, 0.3, 0.5, 0.7, 0.9]
    betas = [0.1, 3.0, 30.0] if quick else [0.1, 1.0, 3.0, 10.0, 30.0]
    rows = sweep_rows([1], ["boltzmann"], fractions, betas, threads=threads)
    rows += sweep_rows([2], ["boltzmann", "boson", "fermion"], fractions, betas, threads=threads)
    stage_gap = max(abs(r["W_ins"] + r["W_exp"] + r["W_rem"] - r["W_tot"]) for r in rows)
    single_rem = max(abs(r["W_rem"]) for r in rows if r["N"] == 1)
    return [
        Check("stage_sum_gap", stage_gap, "<", 1e-9),
        Check("N1_max_W_rem", single_rem, "<", 1e-9),
        Check("min_W_tot", min(r["W_tot"] for r in rows), ">=", -1e-10),
        Check("grid_points", float(len(rows)), ">=", 60.0 if quick else 100.0),
    ]


def check_jarzynski(quick: bool, threads: int | None) -> list[Check]:
    n_traj = 10_000 if quick else 100_000
    checks = []
    for label, tau in (("slow", 10.0), ("fast", 0.1)):
        report = ramp_check(1.0, 4.0, tau, n_traj, seed=VERIFY_SEED, threads=threads)
        checks.append(Check(f"{label}_relative_deviation", report.relative_deviation, "<", 0.05))
        checks.append(Check(f"{label}_W_minus_dF_plus_3SE", report.dissipated_work + 3.0 * report.work_se, ">=", 0.0))
    return checks


def check_langevin_erasure(quick: bool, threads: int | None) -> list[Check]:
    # quick mode drops the slowest duration, never the trajectory floor
    taus = [5.0, 10.0, 20.0, 40.0] if quick else [5.0, 10.0, 20.0, 40.0, 80.0]
    params = LangevinParams(dt=2.5e-4, seed=VERIFY_SEED)
    outcomes, fit = erasure_sweep(taus, 4.0, params, MIN_SUCCESS_SAMPLES, threads=threads)
    assert fit is not None
    rises = [
        b.mean_heat - a.mean_heat - 3.0 * math.hypot(a.heat_se, b.heat_se)
        for a, b in zip(outcomes, outcomes[1:], strict=False)
    ]
    return [
        Check("min_trajectories", min(o.n_traj for o in outcomes), ">=", MIN_SUCCESS_SAMPLES),
        Check("min_success_rate", min(o.success_rate for o in outcomes), ">=", 0.9),
        Check("worst_heat_rise_minus_3SE", max(rises), "<=", 0.0),
        Check("worst_bound_margin_in_SE", min((o.mean_heat - o.bound) / o.heat_se for o in outcomes), ">=", -3.0),
        Check("fit_Q_L_relative_error", abs(fit.q_landauer - LN2) / LN2, "<", 0.15),
        Check("fit_alpha", fit.alpha, ">", 0.0),
    ]


def _bsc_information(error: float) -> float:
    return LN2 - shannon_entropy(np.array([error, 1.0 - error]))


def check_feedback_ledger(quick: bool, threads: int | None) -> list[Check]:
    prior = ProbDist.uniform(2)
    gain_gap = 0.0
    w_tot = 0.0
    for error in (0.0, 0.05, 0.1, 0.25, 0.5):
        meas = binary_symmetric_measurement(error)
        gain_gap = max(gain_gap, abs(measurement_gain(prior, meas, 1.0) - _bsc_information(error)))
        w_tot = max(w_tot, abs(szilard_cycle_ledger(meas, 0.0, 1.0, prior).w_tot))
    bennett = bennett_ledger(perfect_measurement(2), 1.0)
    return [
        Check("max_gain_oracle_gap", gain_gap, "<", 1e-10),
        Check("max_abs_w_tot", w_tot, "<", 1e-12),
        Check("bennett_reset_gap", abs(bennett.w_reset - LN2), "<", 1e-12),
    ]


def check_gambling(quick: bool, threads: int | None) -> list[Check]:
    n_traj = 10_000 if quick else 100_000
    protocol = TwoStateProtocol.linear(0.0, 4.0, 1.0, rate=0.5)
    params = GamblingParams(seed=VERIFY_SEED)
    checks = []
    for label, rule in (
        ("deadline", StoppingRule.deadline(1.0)),
        ("threshold", StoppingRule.work_threshold(0.5, 1.0)),
    ):
        report = gambling_demon(protocol, params, rule, n_traj, threads)
        checks.append(Check(f"{label}_ft_deviation_in_SE", abs(report.ft_estimator - 1.0) / report.ft_se, "<=", 3.0))
        checks.append(Check(f"{label}_margin_plus_3SE", report.margin + 3.0 * report.margin_se, ">=", 0.0))
        if label == "threshold":
            checks.append(Check("threshold_W_minus_dF", report.equilibrium_margin, "<", 0.0))
    return checks


def check_bounds(quick: bool, threads: int | None) -> list[Check]:
    a = 2.0
    numeric = zero_temperature_bound(HeatCapacityModel.phonon(a), LN2).heat
    closed = phonon_bit_erasure_heat(a)
    n = 50
    pair = finite_size_bounds(LN2, 2, n)
    return [
        Check("phonon_relative_gap", abs(numeric - closed) / closed, "<", 1e-8),
        Check("distillation_gap", abs(distillation_erasure_cost(5, 0.0, 2.0) - 5 * LN2 / 2.0), "<=", 0.0),
        Check("single_shot_gap", abs(single_shot_battery_bound(DensityMatrix.maximally_mixed(2)) - 1.0), "<", 1e-12),
        Check("finite_size_noninteracting_gap", abs(pair.noninteracting - 1.0 / n), "<", 1e-12),
        Check("finite_size_universal_gap", abs(pair.universal - 2.0 * LN2**2 / 4.0), "<", 1e-12),
    ]


def check_entropy_properties(quick: bool, threads: int | None) -> list[Check]:
    rng = stream(VERIFY_SEED, 1)
    n = 200 if quick else 1000
    additivity = invariance = mi_gap = 0.0
    subadditivity = klein = math.inf
    for _ in range(n):
        rho = random_density_matrix(2, rng)
        sigma = random_density_matrix(3, rng)
        joint = tensor(rho, sigma)
        additivity = max(
            additivity, abs(von_neumann_entropy(joint) - von_neumann_entropy(rho) - von_neumann_entropy(sigma))
        )
        u = random_unitary(6, rng)
        invariance = max(invariance, abs(von_neumann_entropy(evolve(joint, u)) - von_neumann_entropy(joint)))
        mixed = random_density_matrix(6, rng)
        subadditivity = min(subadditivity, mutual_information_quantum(mixed, (2, 3)))
        klein = min(klein, relative_entropy(rho, random_density_matrix(2, rng)))
        forms = mutual_information_identities(random_joint(3, 4, rng))
        mi_gap = max(mi_gap, max(forms) - min(forms))
    return [
        Check("additivity_gap", additivity, "<", 1e-10),
        Check("unitary_invariance_gap", invariance, "<", 1e-10),
        Check("min_mutual_information", subadditivity, ">=", -1e-12),
        Check("min_relative_entropy", klein, ">=", -1e-12),
        Check("mutual_information_identity_gap", mi_gap, "<", 1e-10),
    ]


CRITERIA: dict[str, Callable[[bool, int | None], list[Check]]] = {
    "reeb_wolf": check_reeb_wolf,
    "landauer_bound": check_landauer_bound,
    "semw": check_semw,
    "szilard_golden": check_szilard_golden,
    "szilard_stages": check_szilard_stages,
    "jarzynski": check_jarzynski,
    "langevin_erasure": check_langevin_erasure,
    "feedback_ledger": check_feedback_ledger,
    "gambling": check_gambling,
    "bounds": check_bounds,
    "entropy_properties": check_entropy_properties,
}


def verify(
    quick: bool = False,
    inject_fault: str | None = None,
    only: list[str] | None = None,
    threads: int | None = None,
) -> VerifyReport:
    """
    Run the acceptance criteria.

    Args:
        quick: Reduced ensemble sizes
        inject_fault: Criterion whose first limit is made unsatisfiable
        only: Subset of criteria to run (all by default)
        threads: Workers for the ensemble experiments

    Raises:
        ConfigError: for an unknown criterion name
    """
    names = only or list(CRITERIA)
    for name in [*names, *([inject_fault] if inject_fault else [])]:
        if name not in CRITERIA:
            raise ConfigError(f"unknown criterion {name!r}; choose from {list(CRITERIA)}", key=name)

    results = []
    for name in names:
        started = time.perf_counter()
        checks = CRITERIA[name](quick, threads)
        if name == inject_fault:
            checks = [checks[0].impossible(), *checks[1:]]
        result = CriterionResult(name, tuple(checks), time.perf_counter() - started)
        if not result.passed:
            logger.warning("criterion %s failed: %s", name, "; ".join(c.describe() for c in checks if not c.passed))
        results.append(result)
    return VerifyReport(tuple(results))


def print_report(report: VerifyReport) -> None:
    for result in report.results:
        status = "PASS" if result.passed else "FAIL"
        print(f"[verify] {status} {result.name} ({result.seconds:.1f} s)")
        for check in result.checks:
            mark = "ok " if check.passed else "BAD"
            print(f"    {mark} {check.describe()}")
    total = len(report.results)
    failed = len(report.failures)
    print(f"[verify] {'OK' if report.passed else 'FAIL'} ({total - failed}/{total} criteria passed)")
