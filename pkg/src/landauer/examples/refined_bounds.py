"""
Refinements of the Landauer bound in closed form.

    - finite time:  Q >= kT ln 2 + alpha / tau
    - finite bath:  entropy production floors for an n-level bath
    - zero temperature: a phonon bath heated from T = 0 must absorb a finite heat
    - single shot: battery size S + V / (2 sqrt(M)) bits
    - distillation: cost of erasing N copies up to failure probability epsilon
"""

from src.common.log_config import configure_logging
from src.info_core.entropy import LN2
from src.info_core.types import DensityMatrix
from src.landauer.bounds import (
    HeatCapacityModel,
    distillation_erasure_cost,
    finite_size_bounds,
    finite_time_bound,
    phonon_bit_erasure_heat,
    single_shot_battery_bound,
    zero_temperature_bound,
)

BETA = 1.0


def main() -> None:
    configure_logging()

    print("=== Refined Landauer Bounds ===\n")

    print("--- Finite time (Planckian alpha) ---")
    for tau in (1.0, 10.0, 100.0):
        print(f"tau={tau:6.1f}: Q >= {finite_time_bound(tau, BETA, 'planckian'):.6f}")

    print("\n--- Finite bath, qubit erased ---")
    for n in (10, 100, 1000):
        pair = finite_size_bounds(LN2, 2, n)
        print(f"n={n:5d}: noninteracting {pair.noninteracting:.3e}, universal {pair.universal:.6f}")

    print("\n--- Zero-temperature phonon bath ---")
    for a in (0.5, 1.0, 2.0):
        bound = zero_temperature_bound(HeatCapacityModel.phonon(a), LN2)
        print(
            f"a={a:.1f}: Q={bound.heat:.6f}, closed form {phonon_bit_erasure_heat(a):.6f}, "
            f"bath ends at T'={bound.bath_temperature_after:.4f}"
        )

    print("\n--- Single shot ---")
    for p in (0.5, 0.9, 0.99):
        state = DensityMatrix.diagonal([p, 1.0 - p])
        print(f"p={p:.2f}: battery >= {single_shot_battery_bound(state):.6f} bits")

    print("\n--- Distillation, N = 100 ---")
    for eps in (0.0, 0.01, 0.1):
        print(f"epsilon={eps:.2f}: W >= {distillation_erasure_cost(100, eps, BETA):.6f}")


if __name__ == "__main__":
    main()
