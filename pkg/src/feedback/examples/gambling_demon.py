"""
Gambling demon: quitting a driven two-state system at a lucky moment.

The energy gap of a two-state system is raised from 0 to 4 kT. A gambler
who stops as soon as the accumulated work reaches a threshold extracts, on
average, more than the equilibrium free-energy change would allow. The
stochastic distinguishability delta restores the balance:

    < exp(-beta (W - dF_neq) - delta) >_T = 1,    <W - dF_neq + kT delta>_T >= 0

Compares the stopping rule with a fixed deadline over a range of thresholds.
"""

import sys

from src.common.log_config import configure_logging
from src.feedback.gambling import GamblingParams, StoppingRule, TwoStateProtocol, gambling_demon

TAU = 1.0
N_TRAJ = 50_000


def main() -> None:
    configure_logging()
    threads = int(sys.argv[1]) if len(sys.argv) >= 2 else 1

    print("=== Gambling Demon ===\n")
    protocol = TwoStateProtocol.linear(0.0, 4.0, TAU, rate=0.5)
    params = GamblingParams(seed=5)

    rules = [("deadline", StoppingRule.deadline(TAU))]
    rules += [(f"W >= {w}", StoppingRule.work_threshold(w, TAU)) for w in (0.25, 0.5, 1.0)]

    print(f"{'rule':<10} {'<W>':>8} {'<dF>':>8} {'<W>-<dF>':>9} {'<delta>':>8} {'FT':>8} {'margin':>8} {'<T>':>6}")
    for label, rule in rules:
        r = gambling_demon(protocol, params, rule, N_TRAJ, threads)
        print(
            f"{label:<10} {r.mean_w_stopped:8.4f} {r.mean_df_stopped:8.4f} {r.equilibrium_margin:9.4f} "
            f"{r.mean_delta:8.4f} {r.ft_estimator:8.4f} {r.margin:8.4f} {r.mean_stopping_time:6.3f}"
        )


if __name__ == "__main__":
    main()
