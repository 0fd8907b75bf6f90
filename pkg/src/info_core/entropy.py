"""
Entropy calculus in nats.

Classical:
    information_content, shannon_entropy, conditional_entropy,
    mutual_information_classical (plus the three equivalent identities)
Quantum:
    von_neumann_entropy, relative_entropy, mutual_information_quantum,
    observational_entropy

All x ln x terms use scipy.special.entr/xlogy, so 0 ln 0 = 0 without branching.
Use bits()/nats() to convert between units.
"""

import math

import numpy as np
from scipy.special import entr, xlogy

from src.common.errors import DomainError, ShapeError
from src.info_core.states import partial_trace
from src.info_core.types import (
    EIGEN_FLOOR,
    CoarseGraining,
    DensityMatrix,
    JointDist,
    ProbDist,
    as_density,
)

LN2 = math.log(2.0)


def bits(value_nats: float) -> float:
    """Convert nats to bits."""
    return value_nats / LN2


def nats(value_bits: float) -> float:
    """Convert bits to nats."""
    return value_bits * LN2


def _weights(p: ProbDist | np.ndarray) -> np.ndarray:
    return p.weights if isinstance(p, ProbDist) else ProbDist(p).weights


def _table(p: JointDist | np.ndarray) -> np.ndarray:
    return p.table if isinstance(p, JointDist) else JointDist(p).table


# ---------------------------------------------------------------------------
# Classical
# ---------------------------------------------------------------------------


def information_content(p: float) -> float:
    """Surprisal -ln p of an event with probability p in (0, 1]."""
    if not (0.0 < p <= 1.0):
        raise DomainError(f"probability must lie in (0, 1], got {p!r}")
    return -math.log(p)


def shannon_entropy(p: ProbDist | np.ndarray) -> float:
    """-sum p ln p."""
    return float(np.sum(entr(_weights(p))))


def conditional_entropy(p: JointDist | np.ndarray) -> float:
    """S(X|Y) = -sum p(x,y) ln p(x|y) for a table indexed [x, y]."""
    t = _table(p)
    py = t.sum(axis=0)
    safe_py = np.where(py > 0, py, 1.0)
    return float(-np.sum(xlogy(t, t / safe_py[np.newaxis, :])))


def mutual_information_classical(p: JointDist | np.ndarray) -> float:
    """I(X:Y) = sum p(x,y) ln[p(x,y) / (p(x) p(y))]."""
    t = _table(p)
    outer = np.outer(t.sum(axis=1), t.sum(axis=0))
    safe = np.where(outer > 0, outer, 1.0)
    return float(np.sum(xlogy(t, t / safe)))


def mutual_information_identities(p: JointDist | np.ndarray) -> tuple[float, float, float]:
    """The three textbook expressions of I(X:Y); they agree for any joint table.

    Returns:
        (S(X) - S(X|Y), S(Y) - S(Y|X), S(X) + S(Y) - S(X,Y))
    """
    t = _table(p)
    sx = shannon_entropy(t.sum(axis=1))
    sy = shannon_entropy(t.sum(axis=0))
    sxy = float(np.sum(entr(t)))
    return (
        sx - conditional_entropy(t),
        sy - conditional_entropy(t.T),
        sx + sy - sxy,
    )


# ---------------------------------------------------------------------------
# Quantum
# ---------------------------------------------------------------------------


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """-tr rho ln rho, i.e. the Shannon entropy of the spectrum."""
    return float(np.sum(entr(as_density(rho).eigenvalues)))


def relative_entropy(sigma: DensityMatrix | np.ndarray, rho: DensityMatrix | np.ndarray) -> float:
    """
    S(sigma || rho) = -S(sigma) - tr(sigma ln rho).

    Returns +inf when the support of sigma is not contained in that of rho.
    """
    sigma = as_density(sigma)
    rho = as_density(rho)
    if sigma.dim != rho.dim:
        raise ShapeError(f"dimension mismatch: {sigma.dim} vs {rho.dim}")

    lam, vecs = np.linalg.eigh(rho.entries)
    weights = np.einsum("ij,jk,ki->i", vecs.conj().T, sigma.entries, vecs).real
    in_support = lam > EIGEN_FLOOR
    if np.any(weights[~in_support] > 1e-12):
        return math.inf

    cross = float(np.sum(weights[in_support] * np.log(lam[in_support])))
    return -von_neumann_entropy(sigma) - cross


def mutual_information_quantum(rho_ab: DensityMatrix | np.ndarray, dims: tuple[int, int]) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB) for a bipartite state with dims (d_A, d_B)."""
    rho_ab = as_density(rho_ab)
    d_a, d_b = dims
    if d_a * d_b != rho_ab.dim:
        raise ShapeError(f"dims {dims} do not factor dimension {rho_ab.dim}")
    rho_a = partial_trace(rho_ab, dims, keep=0)
    rho_b = partial_trace(rho_ab, dims, keep=1)
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab)


def observational_entropy(rho: DensityMatrix | np.ndarray, cg: CoarseGraining) -> float:
    """sum_x p_x (-ln p_x + ln V_x) with p_x = tr(P_x rho) and V_x = tr(P_x)."""
    rho = as_density(rho)
    if cg.projectors[0].shape[0] != rho.dim:
        raise ShapeError("coarse-graining acts on a different dimension")
    p = np.array([np.trace(proj @ rho.entries).real for proj in cg.projectors])
    p = np.clip(p, 0.0, None)
    return float(np.sum(entr(p)) + np.sum(xlogy(p, cg.volumes)))
