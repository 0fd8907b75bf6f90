"""
Quantum Szilard engine: work per cycle versus temperature and statistics.

Sweeps the four-stage cycle (insert wall, measure, expand, remove) for one
and two particles in a box and prints the works in units of kT.

Key insight:
    At high temperature every engine extracts kT ln 2. At low temperature a
    boson pair bunches on one side and the cycle yields (2/3) kT ln 3, while
    a fermion pair always splits one-and-one, so measuring the side tells
    nothing and the engine produces no work.

Pass a thread count to distribute the grid over Spark:

    make run-spark MODULE=szilard EXAMPLE=quantum_szilard_engine ARGS="4"
"""

import sys

from src.common.log_config import configure_logging
from src.info_core.entropy import LN2
from src.szilard.box import BoxSpec, Statistics
from src.szilard.classical import classical_stage_decomposition, classical_szilard_work
from src.szilard.cycle import GOLDEN_TOTAL_WORK, SWEEP_COLUMNS, sweep_rows

BETA_EPS1 = (0.001, 0.1, 1.0, 5.0, 20.0)


def print_rows(rows: list[dict]) -> None:
    print(" ".join(f"{c:>10}" for c in SWEEP_COLUMNS))
    for row in rows:
        cells = [f"{row[c]:>10.5f}" if isinstance(row[c], float) else f"{row[c]!s:>10}" for c in SWEEP_COLUMNS]
        print(" ".join(cells))


def main() -> None:
    configure_logging()
    threads = int(sys.argv[1]) if len(sys.argv) >= 2 else 1

    print("=== Quantum Szilard Engine ===\n")

    print("--- One particle, wall in the middle ---")
    box = BoxSpec(1.0, 1.0, 1, Statistics.BOLTZMANN)
    for beta_eps1 in BETA_EPS1:
        beta = beta_eps1 / box.ground_energy()
        stages = classical_stage_decomposition(box.with_cutoff(beta), beta)
        print(
            f"beta eps1={beta_eps1:7.3f}: W_ins={beta * stages.w_ins:+.5f} W_exp={beta * stages.w_exp:+.5f} "
            f"Delta={beta * stages.delta:.5f}"
        )
    print(f"Gas-piston expansion from V/2: W = {classical_szilard_work(1.0):+.6f} kT\n")

    print("--- Two particles, wall in the middle ---")
    rows = sweep_rows([2], ["boson", "fermion"], [0.5], BETA_EPS1, threads=threads)
    print_rows(rows)

    print("\nReference values (units of kT):")
    for name, value in GOLDEN_TOTAL_WORK.items():
        print(f"  {name:<20} {value:.6f}")
    print(f"  ln 2                 {LN2:.6f}")


if __name__ == "__main__":
    main()
