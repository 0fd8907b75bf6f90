"""
Entropy and correlations: classical and quantum measures side by side.

Walks through the information measures the rest of the library is built on:
    1. Shannon entropy, conditional entropy and mutual information of a noisy bit
    2. Von Neumann entropy of a Bell pair and of its reduced state
    3. Recording which side of a box a particle is on with a CNOT
    4. Observational entropy under coarse and fine measurements

Key insight:
    A pure entangled state has zero entropy, yet each half on its own is
    maximally mixed; the missing ln 2 per half shows up as 2 ln 2 of
    quantum mutual information.
"""

import numpy as np

from src.common.log_config import configure_logging
from src.info_core.entropy import (
    LN2,
    bits,
    conditional_entropy,
    mutual_information_classical,
    mutual_information_quantum,
    observational_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from src.info_core.states import bell_state, partial_trace, record_which_side
from src.info_core.types import CoarseGraining, DensityMatrix, JointDist

# Flip probability of the noisy channel
ERROR = 0.1


def noisy_bit_table(error: float) -> JointDist:
    """p(x, m) for a fair bit read through a channel that errs with probability ``error``."""
    return JointDist(0.5 * np.array([[1.0 - error, error], [error, 1.0 - error]]))


def main() -> None:
    configure_logging()

    print("=== Entropy and Correlations ===\n")

    joint = noisy_bit_table(ERROR)
    print(f"--- Noisy bit (error {ERROR}) ---")
    print(f"H(X)    = {shannon_entropy(joint.marginal_x):.6f} nats")
    print(f"H(X|M)  = {conditional_entropy(joint):.6f} nats")
    info = mutual_information_classical(joint)
    print(f"I(X:M)  = {info:.6f} nats = {bits(info):.6f} bits")

    print("\n--- Bell pair ---")
    pair = bell_state()
    half = partial_trace(pair, (2, 2), keep=0)
    print(f"S(AB)   = {von_neumann_entropy(pair):.2e}")
    print(f"S(A)    = {von_neumann_entropy(half):.6f}  (ln 2 = {LN2:.6f})")
    print(f"I(A:B)  = {mutual_information_quantum(pair, (2, 2)):.6f}  (2 ln 2)")

    print("\n--- Recording the side of a particle ---")
    record = record_which_side(0.5)
    print(f"I(S:M) after CNOT = {mutual_information_quantum(record, (2, 2)):.6f}")

    print("\n--- Observational entropy ---")
    plus = DensityMatrix.pure(np.array([1.0, 1.0]) / np.sqrt(2.0))
    print(f"S_vN(|+>)              = {von_neumann_entropy(plus):.2e}")
    print(f"S_obs, computational   = {observational_entropy(plus, CoarseGraining.computational(2)):.6f}")
    print(f"S_obs, trivial         = {observational_entropy(plus, CoarseGraining.trivial(2)):.6f}")


if __name__ == "__main__":
    main()
