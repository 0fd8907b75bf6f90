"""
State plumbing: composition, reduction and unitary evolution.

    tensor(a, b)                 rho_A ⊗ rho_B
    partial_trace(rho, dims, k)  reduce a composite onto the kept factors
    evolve(rho, U)               U rho U^dagger, U checked unitary

plus the named states and gates used across the project and random
generators for property sweeps.
"""

from collections.abc import Sequence

import numpy as np
from scipy.stats import unitary_group

from src.common.errors import InvariantError, ShapeError
from src.info_core.types import IDENTITY_TOL, DensityMatrix, JointDist, as_density

UNITARY_TOL = IDENTITY_TOL


def tensor(*states: DensityMatrix | np.ndarray) -> DensityMatrix:
    """Kronecker product of any number of states, left factor first."""
    out = np.ones((1, 1), dtype=np.complex128)
    for s in states:
        out = np.kron(out, as_density(s).entries)
    return DensityMatrix(out)


def partial_trace(
    rho: DensityMatrix | np.ndarray,
    dims: Sequence[int],
    keep: int | Sequence[int],
) -> DensityMatrix:
    """
    Trace out every factor of ``dims`` not listed in ``keep``.

    Args:
        rho: State on the composite space prod(dims)
        dims: Factor dimensions, left to right
        keep: Index or indices of the factors to keep (order preserved)

    Returns:
        Reduced state on the kept factors
    """
    rho = as_density(rho)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.dim:
        raise ShapeError(f"dims {dims} do not factor dimension {rho.dim}")
    kept = sorted({keep} if isinstance(keep, int) else set(keep))
    if any(k < 0 or k >= len(dims) for k in kept):
        raise ShapeError(f"keep {keep} out of range for {len(dims)} factors")

    t = rho.entries.reshape(dims + dims)
    n = len(dims)
    for axis in sorted(set(range(len(dims))) - set(kept), reverse=True):
        t = np.trace(t, axis1=axis, axis2=axis + n)
        n -= 1
    d_kept = int(np.prod([dims[k] for k in kept])) if kept else 1
    return DensityMatrix(t.reshape(d_kept, d_kept))


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``u`` as a complex array, raising if it is not unitary within ``tol``."""
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ShapeError(f"unitary must be square, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > tol:
        raise InvariantError("matrix is not unitary")
    return u


def evolve(rho: DensityMatrix | np.ndarray, u: np.ndarray) -> DensityMatrix:
    """U rho U^dagger."""
    rho = as_density(rho)
    u = check_unitary(u)
    if u.shape[0] != rho.dim:
        raise ShapeError(f"unitary of size {u.shape[0]} on a state of dimension {rho.dim}")
    return DensityMatrix(u @ rho.entries @ u.conj().T)


# ---------------------------------------------------------------------------
# Named states and gates
# ---------------------------------------------------------------------------


def cnot() -> np.ndarray:
    """Controlled-NOT with the first qubit as control."""
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        dtype=np.complex128,
    )


def swap(d: int = 2) -> np.ndarray:
    """Exchange of two d-level systems."""
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            out[j * d + i, i * d + j] = 1.0
    return out


def bell_state() -> DensityMatrix:
    """(|00> + |11>)/sqrt(2)."""
    return DensityMatrix.pure(np.array([1.0, 0.0, 0.0, 1.0]))


def record_which_side(p_left: float = 0.5) -> DensityMatrix:
    """
    Copy a particle's side (|L> = |0>, |R> = |1>) into a blank memory with a CNOT.

    Input  p|L><L| + (1-p)|R><R|  ⊗ |0><0|
    Output p|L,0><L,0| + (1-p)|R,1><R,1|
    """
    system = DensityMatrix.diagonal([p_left, 1.0 - p_left])
    memory = DensityMatrix.basis(2, 0)
    return evolve(tensor(system, memory), cnot())


# ---------------------------------------------------------------------------
# Random generators for property sweeps
# ---------------------------------------------------------------------------


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Ginibre-distributed mixed state of the given rank (full rank by default)."""
    k = rank or dim
    a = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    m = a @ a.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary."""
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_joint(n_x: int, n_y: int, rng: np.random.Generator) -> JointDist:
    """Uniform draw of an n_x by n_y joint table."""
    return JointDist(rng.dirichlet(np.ones(n_x * n_y)).reshape(n_x, n_y))
