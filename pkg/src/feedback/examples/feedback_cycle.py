"""
Measurement and feedback: what a noisy record is worth.

A fair bit is measured through a binary symmetric channel. The record adds
T I(X:M) of free energy, the feedback step can extract at most that much,
and measurement plus reset pay it back, so the full cycle costs nothing at
best and never produces net work.

Also shows the staircase information ratchet, where periodic measurement
lets a particle climb a staircase against detailed-balance rates.
"""

from src.common.log_config import configure_logging
from src.feedback.ledger import bennett_ledger, szilard_cycle_ledger
from src.feedback.measurement import binary_symmetric_measurement, perfect_measurement, undershoot_measurement
from src.feedback.ratchet import detailed_balance_rates, staircase_ratchet
from src.info_core.types import ProbDist

TEMPERATURE = 1.0
ERRORS = (0.0, 0.05, 0.1, 0.25, 0.5)


def main() -> None:
    configure_logging()

    print("=== Measurement and Feedback ===\n")
    prior = ProbDist.uniform(2)

    print(f"{'error':>6} {'I(X:M)':>8} {'W_meas':>8} {'W_fb':>8} {'W_reset':>8} {'W_tot':>8}")
    for error in ERRORS:
        ledger = szilard_cycle_ledger(binary_symmetric_measurement(error), 0.0, TEMPERATURE, prior)
        print(
            f"{error:6.2f} {ledger.i_xm:8.5f} {ledger.w_meas:8.5f} {ledger.w_fb:8.5f} "
            f"{ledger.w_reset:8.5f} {ledger.w_tot:8.1e}"
        )

    bennett = bennett_ledger(perfect_measurement(2), TEMPERATURE)
    print(f"\nFree measurement, cost in the reset: W_reset = {bennett.w_reset:.6f}\n")

    print("--- Staircase ratchet, step 1 kT ---")
    rates = detailed_balance_rates(1.0, TEMPERATURE)
    for label, period, meas in (
        ("no feedback", None, None),
        ("every 1.0, 10% undershoot", 1.0, undershoot_measurement(32, 0.1)),
        ("after every jump", 0.0, None),
    ):
        r = staircase_ratchet(1.0, rates, period, meas, 5000, seed=11, kT=TEMPERATURE)
        bound = "n/a" if r.bound_holds is None else f"{r.bound:.4f} ({'holds' if r.bound_holds else 'VIOLATED'})"
        print(f"{label:<26} v={r.mean_velocity:+.4f}  gain/tick={r.gain_per_tick:.4f}  kT I={bound}")


if __name__ == "__main__":
    main()
