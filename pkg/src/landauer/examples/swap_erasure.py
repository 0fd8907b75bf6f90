"""
Swap erasure: resetting a qubit by swapping it with a thermal bath qubit.

For each bath gap E the maximally mixed system is swapped with a bath qubit
in its Gibbs state. The ledger splits the bath heat into the Landauer
minimum plus two non-negative terms:

    beta dQ_B = -dS_S + I(S':B') + S(sigma_B || gamma_B)

Algorithm:
    1. Build rho_S ⊗ gamma_B and apply the SWAP
    2. Trace out each side, compute entropies and the heat tr(H_B dsigma_B)
    3. Compare with the closed form (1/2 - e^{-beta E}/Z) E

A random-unitary sweep (distributed over Spark when threads > 1) then checks
the same equality on arbitrary processes, and random four-party cycles check
the memory form of the bound.
"""

import sys

import numpy as np

from src.common.log_config import configure_logging
from src.landauer.erasure import landauer_minimum, reeb_wolf_sweep, run_erasure, swap_erasure_cost, swap_setup
from src.landauer.semw import semw_sweep

BETA = 1.0
GAPS = (0.5, 1.0, 2.0, 5.0, 10.0)


def main() -> None:
    configure_logging()
    threads = int(sys.argv[1]) if len(sys.argv) >= 2 else 1

    print("=== Swap Erasure of a Qubit ===\n")
    print(f"beta = {BETA}, Landauer minimum for one bit: {landauer_minimum(-np.log(2.0), BETA):.6f}\n")
    print(f"{'E':>6} {'dS_S':>10} {'beta dQ_B':>10} {'I(S:B)':>10} {'D(B||g)':>10} {'closed':>10}")
    for gap in GAPS:
        ledger = run_erasure(swap_setup(gap, BETA))
        print(
            f"{gap:6.2f} {ledger.delta_s_system:10.6f} {BETA * ledger.heat_to_bath:10.6f} "
            f"{ledger.mutual_info:10.6f} {ledger.rel_entropy_bath:10.6f} {BETA * swap_erasure_cost(gap, BETA):10.6f}"
        )

    print(f"\n--- 200 random processes, threads={threads} ---")
    sweep = reeb_wolf_sweep(200, seed=7, threads=threads)
    print(f"Worst equality residual : {sweep.max_residual:.2e}")
    print(f"Smallest Landauer margin: {sweep.min_landauer_margin:.2e}")

    ledgers = semw_sweep(100, seed=7, threads=threads)
    print("\n--- 100 system/environment/memory/work cycles ---")
    print(f"Smallest memory-inequality slack: {min(ledger.slack for ledger in ledgers):.2e}")


if __name__ == "__main__":
    main()
