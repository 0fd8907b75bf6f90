"""
Experiment registry: one entry per configurable experiment.

Every experiment takes its resolved parameters, the master seed and a thread
count, and returns exactly one table row plus a JSON report. Sweeps rely on
the one-row contract: a grid of k points always yields k rows. Experiments
may also summarise a whole sweep (the erasure finite-time fit).
"""

from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NamedTuple

from src.common.data_loader import dump_trajectories
from src.common.errors import ConfigError
from src.feedback.gambling import GamblingParams, StoppingRule, TwoStateProtocol, gambling_demon
from src.feedback.ledger import szilard_cycle_ledger
from src.feedback.measurement import binary_symmetric_measurement, measurement_gain, undershoot_measurement
from src.feedback.ratchet import DEFAULT_OFFSETS, detailed_balance_rates, staircase_ratchet
from src.info_core.types import DensityMatrix, ProbDist
from src.landauer.bounds import (
    HeatCapacityModel,
    distillation_erasure_cost,
    finite_size_bounds,
    finite_time_bound,
    phonon_bit_erasure_heat,
    single_shot_battery_bound,
    zero_temperature_bound,
)
from src.landauer.erasure import reeb_wolf_sweep
from src.stochastic.erasure import erasure_experiment, fit_finite_time, protocol_duration
from src.stochastic.jarzynski import ramp_check
from src.stochastic.langevin import LangevinParams
from src.szilard.cycle import sweep_rows


class ExperimentResult(NamedTuple):
    row: dict[str, Any]
    report: dict[str, Any]


Runner = Callable[[dict[str, Any], int, int | None], ExperimentResult]
SweepSummary = Callable[[Sequence[dict[str, Any]]], dict[str, Any]]


class Experiment(NamedTuple):
    name: str
    run: Runner
    deterministic: bool
    summarize_sweep: SweepSummary | None = None


def run_erasure_point(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    langevin = LangevinParams(kT=params["kT"], dt=params["dt"], seed=seed)
    dump = params["dump_path"]
    outcome = erasure_experiment(
        params["tau"], params["f_max"], langevin, params["n_traj"], params["chunk_size"], threads, record=bool(dump)
    )
    row = outcome.as_row()
    report = {k: v for k, v in outcome._asdict().items() if k not in ("heat_samples", "paths")}
    report["meets_sample_floor"] = outcome.meets_sample_floor
    if dump and outcome.paths is not None:
        steps = langevin.for_duration(protocol_duration(params["tau"]))
        target = dump_trajectories(Path(dump).resolve(), outcome.paths.T, steps.dt, steps.n_steps)
        report["trajectory_dump"] = str(target)
    return ExperimentResult(row, report)


def summarize_erasure(rows: Sequence[dict[str, Any]]) -> dict[str, Any]:
    """Finite-time fit Q_L + alpha / tau over the swept durations."""
    if len({r["tau"] for r in rows}) < 2:
        return {}
    fit = fit_finite_time([r["tau"] for r in rows], [r["mean_heat"] for r in rows], [r["SE"] for r in rows])
    return {"fit": fit._asdict()}


def run_jarzynski(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    report = ramp_check(
        params["k1"],
        params["k2"],
        params["tau"],
        params["n_traj"],
        dt=params["dt"],
        seed=seed,
        kT=params["kT"],
        threads=threads,
    )
    row = {
        "k1": params["k1"],
        "k2": params["k2"],
        "tau": params["tau"],
        "mean_exp_work": report.mean_exp_work,
        "exp_delta_f": report.exp_delta_f,
        "relative_deviation": report.relative_deviation,
        "mean_work": report.mean_work,
        "work_se": report.work_se,
        "delta_f": report.delta_f,
        "jensen_holds": report.jensen_holds,
    }
    return ExperimentResult(row, report.to_json())


def run_szilard(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    rows = sweep_rows(
        [params["n_particles"]], [params["statistics"]], [params["l_over_L"]], [params["beta_eps1"]]
    )
    return ExperimentResult(rows[0], dict(rows[0]))


def run_bounds(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    a = params["phonon_coefficient"]
    zero_t = zero_temperature_bound(HeatCapacityModel.phonon(a), params["delta_s"])
    finite = finite_size_bounds(params["delta_s"], params["d"], params["bath_size"])
    state = DensityMatrix.diagonal(ProbDist.normalized(params["populations"]).weights)
    row = {
        "zero_temperature_heat": zero_t.heat,
        "phonon_bit_erasure_heat": phonon_bit_erasure_heat(a),
        "finite_time": finite_time_bound(params["tau"], params["beta"], params["alpha_model"], params["alpha"]),
        "finite_size_noninteracting": finite.noninteracting,
        "finite_size_universal": finite.universal,
        "single_shot_bits": single_shot_battery_bound(state),
        "distillation_cost": distillation_erasure_cost(params["n_copies"], params["epsilon"], params["beta"]),
    }
    report = {
        **row,
        "zero_temperature": zero_t._asdict(),
        "finite_size": finite._asdict(),
    }
    return ExperimentResult(row, report)


def run_feedback(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    temperature = params["temperature"]
    meas = binary_symmetric_measurement(params["error"])
    prior = ProbDist.uniform(2)
    ledger = szilard_cycle_ledger(meas, params["delta_f_y"], temperature, prior)
    row: dict[str, Any] = {
        "error": params["error"],
        "measurement_gain": measurement_gain(prior, meas, temperature),
        **ledger.to_json(),
    }
    report: dict[str, Any] = {"ledger": ledger.to_json(), "measurement_gain": row["measurement_gain"]}
    if params["ratchet"]:
        kT = temperature
        staircase = staircase_ratchet(
            params["step_energy"],
            detailed_balance_rates(params["step_energy"], kT),
            params["feedback_period"],
            undershoot_measurement(DEFAULT_OFFSETS, params["error"]),
            params["n_ticks"],
            seed=seed,
            kT=kT,
        )
        row.update(
            ratchet_velocity=staircase.mean_velocity,
            ratchet_gain_per_tick=staircase.gain_per_tick,
            ratchet_bound=staircase.bound,
            ratchet_bound_holds=staircase.bound_holds,
        )
        report["ratchet"] = staircase.to_json()
    return ExperimentResult(row, report)


def run_gamble(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    tau = params["tau"]
    protocol = TwoStateProtocol.linear(params["gap_start"], params["gap_stop"], tau, params["rate"])
    if params["rule"] == "deadline_only":
        rule = StoppingRule.deadline(tau)
    elif params["rule"] == "work_threshold":
        rule = StoppingRule.work_threshold(params["threshold"], tau)
    else:
        raise ConfigError(f"unknown stopping rule {params['rule']!r}", key="rule")
    report = gambling_demon(
        protocol, GamblingParams(kT=params["kT"], n_grid=params["n_grid"], seed=seed), rule, params["n_traj"], threads
    )
    payload = report.to_json()
    row = {
        "rule": params["rule"],
        "threshold": params["threshold"],
        "mean_w": report.mean_w_stopped,
        "mean_df": report.mean_df_stopped,
        "mean_delta": report.mean_delta,
        "ft_estimator": report.ft_estimator,
        "ft_se": report.ft_se,
        "margin": report.margin,
        "equilibrium_margin": report.equilibrium_margin,
        "n_excluded": report.n_excluded,
    }
    return ExperimentResult(row, payload)


def run_reeb_wolf(params: dict[str, Any], seed: int, threads: int | None) -> ExperimentResult:
    result = reeb_wolf_sweep(
        params["n_trials"], beta_range=(params["beta_min"], params["beta_max"]), seed=seed, threads=threads
    )
    row = {
        "n_trials": params["n_trials"],
        "max_residual": result.max_residual,
        "min_landauer_margin": result.min_landauer_margin,
    }
    report = {**row, "ledgers": [ledger.as_row() for ledger in result.ledgers]}
    return ExperimentResult(row, report)


EXPERIMENTS: dict[str, Experiment] = {
    "erasure": Experiment("erasure", run_erasure_point, False, summarize_erasure),
    "jarzynski": Experiment("jarzynski", run_jarzynski, False),
    "szilard": Experiment("szilard", run_szilard, True),
    "bounds": Experiment("bounds", run_bounds, True),
    "feedback": Experiment("feedback", run_feedback, False),
    "gamble": Experiment("gamble", run_gamble, False),
    "reeb_wolf": Experiment("reeb_wolf", run_reeb_wolf, True),
}
