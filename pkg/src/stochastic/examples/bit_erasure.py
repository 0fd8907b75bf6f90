"""
Double-well bit erasure with overdamped Langevin dynamics.

A colloidal bit sits in a double well. The barrier is lowered, a tilt pushes
the particle to the right well, and the barrier is raised again. Slower
protocols dissipate less; the mean heat approaches kT ln 2 as

    <Q>(tau) = Q_L + alpha / tau

Algorithm:
    1. Sample the initial position from the equilibrium double well
    2. Integrate with Euler-Maruyama, booking work and heat per step
    3. Per duration: success rate r, mean dissipated heat, bound Q(r)
    4. Least-squares fit of Q_L and alpha over the durations

Trajectory chunks are independent, so with threads > 1 they run on a
local Spark pool and give the same numbers as the serial run.
"""

import sys

from src.common.log_config import configure_logging
from src.info_core.entropy import LN2
from src.stochastic.erasure import DEFAULT_DT, DEFAULT_F_MAX, MIN_SUCCESS_SAMPLES, erasure_sweep
from src.stochastic.langevin import LangevinParams

TAUS = (5.0, 10.0, 20.0, 40.0)
N_TRAJ = MIN_SUCCESS_SAMPLES


def main() -> None:
    configure_logging()
    threads = int(sys.argv[1]) if len(sys.argv) >= 2 else 1

    print("=== Double-Well Bit Erasure ===\n")
    print(f"{N_TRAJ} trajectories per duration, dt={DEFAULT_DT}, f_max={DEFAULT_F_MAX}, threads={threads}\n")

    params = LangevinParams(dt=DEFAULT_DT, seed=1)
    outcomes, fit = erasure_sweep(TAUS, DEFAULT_F_MAX, params, N_TRAJ, threads=threads)

    print(f"{'tau':>6} {'r':>7} {'<Q>':>8} {'SE':>7} {'Q(r)':>8}")
    for o in outcomes:
        print(f"{o.tau:6.1f} {o.success_rate:7.3f} {o.mean_heat:8.4f} {o.heat_se:7.4f} {o.bound:8.4f}")

    if fit is not None:
        print(f"\nFit: Q_L = {fit.q_landauer:.4f} +- {fit.q_landauer_se:.4f} (ln 2 = {LN2:.4f})")
        print(f"     alpha = {fit.alpha:.4f} +- {fit.alpha_se:.4f}")


if __name__ == "__main__":
    main()
