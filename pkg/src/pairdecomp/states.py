"""State operators and their pure-vector decompositions.

A state operator is a positive semidefinite matrix; trace one is
deliberately not required.  A decomposition is an ordered list of
(possibly zero, unnormalized) vectors whose outer products sum to the
operator.  Order matters: downstream objectives pair vectors by index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .exceptions import (
    DimensionMismatchError,
    LengthTooShortError,
    NotPSDError,
)

#: default relative Frobenius tolerance for decomposition comparisons
DEFAULT_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class StateOperator:
    """Positive semidefinite operator on a d-dimensional complex space."""

    matrix: np.ndarray
    dim: int = field(default=0)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dim", m.shape[0])

    @classmethod
    def from_matrix(cls, matrix, clamp_tol: float = matcore.PSD_CLAMP_TOL) -> "StateOperator":
        """Validate Hermiticity and positivity, then wrap the matrix.

        Eigenvalues in [-clamp_tol * lambda_max, 0) are accepted as noise;
        anything lower raises ``NotPSDError``.
        """
        m = matcore.require_hermitian(matrix)
        matcore._clamped_psd_eig(m, clamp_tol)
        return cls(m)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def is_zero(self, tol: float = 1e-14) -> bool:
        return matcore.frobenius(self.matrix) <= tol

    def scaled(self, factor: float) -> "StateOperator":
        return StateOperator(self.matrix * factor)


def as_state(operator) -> StateOperator:
    """Coerce a matrix or StateOperator to a validated StateOperator."""
    if isinstance(operator, StateOperator):
        return operator
    return StateOperator.from_matrix(operator)


def mix(a: StateOperator, b: StateOperator, t: float) -> StateOperator:
    """Convex combination t*a + (1-t)*b."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot mix dimensions {a.dim} and {b.dim}")
    return StateOperator(t * a.matrix + (1.0 - t) * b.matrix)


@dataclass(frozen=True)
class Decomposition:
    """Ordered list of vectors, stored as rows of an (n, dim) array."""

    vectors: np.ndarray
    dim: int = field(default=0)
    length: int = field(default=0)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise DimensionMismatchError(
                f"decomposition vectors must form a 2-d array, got shape {v.shape}"
            )
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "dim", v.shape[1])
        object.__setattr__(self, "length", v.shape[0])

    @classmethod
    def from_vectors(cls, vectors, dim: int | None = None) -> "Decomposition":
        """Build from an iterable of d-vectors; ``dim`` is required when empty."""
        rows = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
        if not rows:
            if dim is None:
                raise DimensionMismatchError("empty decomposition needs an explicit dim")
            return cls(np.zeros((0, dim), dtype=np.complex128))
        return cls(np.vstack(rows))

    @property
    def norms_squared(self) -> np.ndarray:
        return np.real(np.sum(self.vectors * self.vectors.conj(), axis=1))


def reconstruct(decomposition: Decomposition) -> StateOperator:
    """Sum of outer products of the decomposition vectors (PSD by construction)."""
    v = decomposition.vectors
    return StateOperator(matcore.hermitian_part(v.T @ v.conj()))


def is_decomposition_of(
    decomposition: Decomposition,
    target: StateOperator,
    tol: float = DEFAULT_MATCH_TOL,
) -> bool:
    """True iff the vectors reconstruct ``target`` to relative Frobenius tolerance."""
    if decomposition.dim != target.dim:
        raise DimensionMismatchError(
            f"decomposition dim {decomposition.dim} != operator dim {target.dim}"
        )
    err = matcore.frobenius(reconstruct(decomposition).matrix - target.matrix)
    return err <= tol * max(1.0, matcore.frobenius(target.matrix))


def spectral_decomposition(
    tau: StateOperator, rank_tol: float = matcore.DEFAULT_RANK_TOL
) -> Decomposition:
    """Eigenvector decomposition: vector j is sqrt(lambda_j) times eigenvector j.

    Eigenvalues come out decreasing, so the vector norms do too; vectors
    for numerically zero eigenvalues are exact zeros.
    """
    eig = matcore._clamped_psd_eig(tau.matrix)
    vals = eig.eigenvalues.copy()
    lam_max = float(vals[0]) if vals.size else 0.0
    vals[vals <= rank_tol * lam_max] = 0.0
    vectors = (eig.eigenvectors * np.sqrt(vals)).T
    return Decomposition(vectors)


def decomposition_from_unitary(tau: StateOperator, remix: np.ndarray) -> Decomposition:
    """Decomposition of length n from an n x n unitary remix of the spectral one.

    Vector j is sum_k remix[j, k] * sqrt(lambda_k) * e_k over the support
    eigenvectors e_k; every unitary gives a valid decomposition, and the
    identity gives back the spectral decomposition itself.
    """
    remix = np.asarray(remix, dtype=np.complex128)
    n = remix.shape[0]
    eig = matcore._clamped_psd_eig(tau.matrix)
    vals = eig.eigenvalues
    lam_max = float(vals[0]) if vals.size else 0.0
    rank = int(np.sum(vals > matcore.DEFAULT_RANK_TOL * lam_max)) if lam_max > 0 else 0
    if n < rank:
        raise LengthTooShortError(f"length {n} is below the operator rank {rank}")
    scaled = eig.eigenvectors[:, :rank] * np.sqrt(vals[:rank])
    return Decomposition(remix[:, :rank] @ scaled.T)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary: complex Ginibre, QR, phase correction."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    phases = d / np.abs(d)
    return q * phases


def random_decomposition(tau: StateOperator, length: int, seed: int) -> Decomposition:
    """Seeded random decomposition of ``tau`` with exactly ``length`` vectors.

    Applies a Haar-random unitary remix to the spectral decomposition;
    requires ``length`` at least the rank of ``tau``.
    """
    rng = np.random.default_rng(seed)
    return decomposition_from_unitary(tau, haar_unitary(length, rng))


def pad_to_length(decomposition: Decomposition, length: int) -> Decomposition:
    """Append exact zero vectors until the decomposition has ``length`` entries."""
    if length < decomposition.length:
        raise LengthTooShortError(
            f"cannot pad length {decomposition.length} down to {length}"
        )
    if length == decomposition.length:
        return decomposition
    extra = np.zeros((length - decomposition.length, decomposition.dim), dtype=np.complex128)
    return Decomposition(np.vstack([decomposition.vectors, extra]))


def overlap_values(first: Decomposition, second: Decomposition) -> np.ndarray:
    """Moduli of all cross inner products: entry [j, k] = |<first_j | second_k>|."""
    if first.dim != second.dim:
        raise DimensionMismatchError(
            f"decomposition dims differ: {first.dim} vs {second.dim}"
        )
    return np.abs(first.vectors.conj() @ second.vectors.T)


def random_state_operator(
    dim: int,
    rank: int | None = None,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
    normalize: bool = True,
) -> StateOperator:
    """Random PSD operator of prescribed rank (full rank by default)."""
    if rng is None:
        rng = np.random.default_rng(seed)
    r = dim if rank is None else rank
    if not 0 < r <= dim:
        raise NotPSDError(f"rank must be in 1..{dim}, got {r}")
    b = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    m = matcore.hermitian_part(b @ b.conj().T)
    if normalize:
        m = m / np.trace(m).real
    return StateOperator(m)
