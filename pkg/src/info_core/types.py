"""
Immutable value types for classical distributions and finite-dimensional quantum states.

Natural units throughout: hbar = k_B = 1, energies and temperatures share one
unit, entropies are in nats. Every type validates its invariants on
construction and stores a read-only array, so instances can be shared freely
between threads and parallel ensembles.

Tolerance ladder:
    INVARIANT_TOL  1e-12  type invariants (normalisation, hermiticity, positivity)
    IDENTITY_TOL   1e-10  algebraic identities between computed quantities
    FD_TOL         1e-6   finite-difference checks
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from src.common.errors import DomainError, InvariantError, ShapeError

INVARIANT_TOL = 1e-12
IDENTITY_TOL = 1e-10
FD_TOL = 1e-6

# Eigenvalues below this are treated as exact zeros before x ln x
EIGEN_FLOOR = 1e-14


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# Classical distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Probability vector: non-negative weights summing to one."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if w.size == 0:
            raise InvariantError("empty distribution")
        if np.any(~np.isfinite(w)) or np.any(w < 0):
            raise InvariantError("probabilities must be finite and non-negative")
        if abs(float(np.sum(w)) - 1.0) > INVARIANT_TOL:
            raise InvariantError(f"probabilities sum to {np.sum(w)!r}, not 1")
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def normalized(cls, weights: Any) -> "ProbDist":
        """Normalise non-negative weights into a distribution."""
        w = np.asarray(weights, dtype=np.float64).ravel()
        total = float(np.sum(w))
        if total <= 0:
            raise DomainError("weights must have positive total")
        return cls(w / total)

    @classmethod
    def uniform(cls, n: int) -> "ProbDist":
        return cls(np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return int(self.weights.size)


@dataclass(frozen=True, eq=False)
class JointDist:
    """Joint distribution p(x, y) stored as a table indexed [x, y]."""

    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=np.float64)
        if t.ndim != 2 or t.size == 0:
            raise ShapeError("joint table must be a non-empty matrix")
        if np.any(~np.isfinite(t)) or np.any(t < 0):
            raise InvariantError("joint probabilities must be finite and non-negative")
        if abs(float(np.sum(t)) - 1.0) > INVARIANT_TOL:
            raise InvariantError(f"joint table sums to {np.sum(t)!r}, not 1")
        object.__setattr__(self, "table", _frozen(t))

    @classmethod
    def product(cls, px: ProbDist, py: ProbDist) -> "JointDist":
        return cls(np.outer(px.weights, py.weights))

    @property
    def marginal_x(self) -> ProbDist:
        return ProbDist(self.table.sum(axis=1))

    @property
    def marginal_y(self) -> ProbDist:
        return ProbDist(self.table.sum(axis=0))

    def transpose(self) -> "JointDist":
        return JointDist(self.table.T)


# ---------------------------------------------------------------------------
# Quantum states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive, unit-trace, Hermitian dim x dim complex matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ShapeError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > INVARIANT_TOL:
            raise InvariantError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        if abs(np.trace(m).real - 1.0) > INVARIANT_TOL:
            raise InvariantError(f"trace is {np.trace(m).real!r}, not 1")
        if np.min(np.linalg.eigvalsh(m)) < -INVARIANT_TOL:
            raise InvariantError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with round-off negatives clamped to zero."""
        lam = np.linalg.eigvalsh(self.entries)
        lam = np.where(lam < EIGEN_FLOOR, 0.0, lam)
        return _frozen(lam)

    @classmethod
    def pure(cls, vector: Any) -> "DensityMatrix":
        """Projector onto a normalised ket."""
        v = np.asarray(vector, dtype=np.complex128).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DomainError("zero vector is not a state")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityMatrix":
        v = np.zeros(dim)
        v[index] = 1.0
        return cls.pure(v)

    @classmethod
    def diagonal(cls, probabilities: Any) -> "DensityMatrix":
        p = ProbDist(probabilities) if not isinstance(probabilities, ProbDist) else probabilities
        return cls(np.diag(p.weights).astype(np.complex128))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    def to_json(self) -> dict[str, Any]:
        """``{"dim": d, "entries": [[[re, im], ...], ...]}`` in row-major order."""
        return {
            "dim": self.dim,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> "DensityMatrix":
        raw = np.asarray(payload["entries"], dtype=np.float64)
        dim = int(payload["dim"])
        if raw.shape != (dim, dim, 2):
            raise ShapeError(f"entries shape {raw.shape} does not match dim {dim}")
        return cls(raw[..., 0] + 1j * raw[..., 1])


def as_density(state: "DensityMatrix | np.ndarray") -> DensityMatrix:
    """Accept a DensityMatrix or a raw matrix (validated)."""
    return state if isinstance(state, DensityMatrix) else DensityMatrix(state)


# ---------------------------------------------------------------------------
# Spectra and temperature
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectrumModel:
    """Discrete energy levels with explicit degeneracies, sorted ascending."""

    levels: np.ndarray
    degeneracies: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        e = np.asarray(self.levels, dtype=np.float64).ravel()
        if e.size == 0:
            raise DomainError("empty spectrum")
        if np.any(~np.isfinite(e)):
            raise InvariantError("energy levels must be finite")
        if self.degeneracies is None:
            g = np.ones(e.size, dtype=np.int64)
        else:
            g = np.asarray(self.degeneracies, dtype=np.int64).ravel()
        if g.shape != e.shape:
            raise ShapeError("levels and degeneracies differ in length")
        if np.any(g < 1):
            raise InvariantError("degeneracies must be >= 1")
        order = np.argsort(e, kind="stable")
        object.__setattr__(self, "levels", _frozen(e[order]))
        object.__setattr__(self, "degeneracies", _frozen(g[order]))

    @classmethod
    def qubit(cls, gap: float) -> "SpectrumModel":
        return cls(np.array([0.0, gap]))

    @classmethod
    def harmonic(cls, omega: float, n_levels: int) -> "SpectrumModel":
        """Truncated ladder (n + 1/2) omega, n = 0 .. n_levels - 1."""
        return cls((np.arange(n_levels) + 0.5) * omega)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension (sum of degeneracies)."""
        return int(np.sum(self.degeneracies))

    def matrix(self) -> np.ndarray:
        """Diagonal Hamiltonian with every degenerate level repeated."""
        return np.diag(np.repeat(self.levels, self.degeneracies)).astype(np.complex128)


@dataclass(frozen=True)
class InverseTemperature:
    """beta = 1/T; +inf stands for the ground-state limit."""

    beta: float

    def __post_init__(self) -> None:
        if not (self.beta > 0):
            raise DomainError(f"inverse temperature must be positive, got {self.beta!r}")

    @classmethod
    def from_temperature(cls, temperature: float) -> "InverseTemperature":
        if temperature < 0:
            raise DomainError("temperature must be non-negative")
        return cls(np.inf if temperature == 0 else 1.0 / temperature)

    @property
    def temperature(self) -> float:
        return 0.0 if np.isinf(self.beta) else 1.0 / self.beta


def as_beta(beta: "float | InverseTemperature") -> float:
    """Plain float beta from either representation, validated."""
    if isinstance(beta, InverseTemperature):
        return beta.beta
    return InverseTemperature(float(beta)).beta


# ---------------------------------------------------------------------------
# Coarse-grainings
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoarseGraining:
    """Complete set of mutually orthogonal projectors."""

    projectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        ps = tuple(np.asarray(p, dtype=np.complex128) for p in self.projectors)
        if not ps:
            raise InvariantError("coarse-graining needs at least one projector")
        dim = ps[0].shape[0]
        for i, p in enumerate(ps):
            if p.shape != (dim, dim):
                raise ShapeError("projectors must share one square shape")
            if np.max(np.abs(p @ p - p)) > IDENTITY_TOL or np.max(np.abs(p - p.conj().T)) > IDENTITY_TOL:
                raise InvariantError(f"element {i} is not an orthogonal projector")
            for j in range(i):
                if np.max(np.abs(p @ ps[j])) > IDENTITY_TOL:
                    raise InvariantError(f"projectors {j} and {i} are not orthogonal")
        if np.max(np.abs(sum(ps) - np.eye(dim))) > IDENTITY_TOL:
            raise InvariantError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", tuple(_frozen(p) for p in ps))

    @classmethod
    def computational(cls, dim: int) -> "CoarseGraining":
        """Rank-1 projectors onto the standard basis."""
        return cls(tuple(np.diag(np.eye(dim)[k]) for k in range(dim)))

    @classmethod
    def trivial(cls, dim: int) -> "CoarseGraining":
        return cls((np.eye(dim),))

    @property
    def volumes(self) -> np.ndarray:
        """Rank (trace) of each projector."""
        return np.array([np.trace(p).real for p in self.projectors])
