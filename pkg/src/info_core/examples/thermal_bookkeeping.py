"""
Thermal bookkeeping: Gibbs states, free energies and steady-state engines.

Shows, for a qubit and a truncated oscillator:
    - partition function, average energy, entropy and free energy
    - the nonequilibrium free energy of an excited state and how much of it
      sits above equilibrium
    - quasistatic isothermal work for widening the qubit gap
    - the efficiency identity eta = eta_C + (Tc/Qh) sigma for a heat engine
"""

from src.common.log_config import configure_logging
from src.info_core.engines import clausius_entropy_production, engine_efficiency
from src.info_core.thermal import (
    average_energy,
    free_energy,
    free_energy_gap,
    gibbs_density,
    isothermal_work,
    noneq_free_energy,
    partition_function,
    thermal_entropy,
)
from src.info_core.types import DensityMatrix, SpectrumModel

BETA = 1.0


def describe(name: str, spectrum: SpectrumModel) -> None:
    print(f"--- {name} at beta = {BETA} ---")
    print(f"Z = {partition_function(spectrum, BETA):.6f}")
    print(f"E = {average_energy(spectrum, BETA):.6f}")
    print(f"S = {thermal_entropy(spectrum, BETA):.6f}")
    print(f"F = {free_energy(spectrum, BETA):.6f}")
    print(f"F(gamma) from tr(rho H) - S/beta = {noneq_free_energy(gibbs_density(spectrum, BETA), spectrum, BETA):.6f}\n")


def main() -> None:
    configure_logging()

    print("=== Thermal Bookkeeping ===\n")

    qubit = SpectrumModel.qubit(1.0)
    describe("Qubit, gap 1", qubit)
    describe("Oscillator, 40 levels", SpectrumModel.harmonic(1.0, 40))

    excited = DensityMatrix.basis(2, 1)
    print("--- Excited qubit ---")
    print(f"F_neq              = {noneq_free_energy(excited, qubit, BETA):.6f}")
    print(f"F_neq - F_eq       = {free_energy_gap(excited, qubit, BETA):.6f}")

    work = isothermal_work(SpectrumModel.qubit, BETA, 1.0, 3.0)
    print(f"Widen gap 1 -> 3   : W = {work:.6f} (= F(3) - F(1))\n")

    print("--- Steady-state engine ---")
    for q_h, q_c in ((1.0, -0.5), (1.0, -0.6)):
        report = engine_efficiency(q_h, q_c, 2.0, 1.0)
        print(
            f"Qh={q_h:+.2f} Qc={q_c:+.2f}: eta={report.eta:.3f}, eta_C={report.carnot:.3f}, "
            f"sigma={report.sigma_dot:+.3f}, residual={report.identity_residual:.1e}"
        )
    cycle = clausius_entropy_production([1.0, -0.6], [2.0, 1.0])
    print(f"Clausius sum of the second cycle: {cycle.entropy_flow:+.3f}")


if __name__ == "__main__":
    main()
