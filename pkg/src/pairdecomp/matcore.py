"""Dense complex linear algebra kernel for positive operators.

Hermitian eigendecomposition by cyclic Jacobi rotations, matrix functions
of positive semidefinite operators, support/null projections and the
operator geometric mean.  Everything works on plain ``numpy`` arrays,
never mutates its inputs, and is deterministic: the same input bits give
the same output bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
    SingularOperatorError,
)

#: relative threshold separating "numerically zero" eigenvalues from the support
DEFAULT_RANK_TOL = 1e-10

#: relative tolerance for accepting a matrix as Hermitian
HERMITICITY_TOL = 1e-10

#: eigenvalues in [-PSD_CLAMP_TOL * lambda_max, 0) are clamped to zero
PSD_CLAMP_TOL = 1e-10

#: eigenvalues below this (relative) are indistinguishable from zero and
#: pinned exactly, so square roots do not amplify O(eps) noise to O(sqrt(eps))
EIG_NOISE_FLOOR = 1e-14

_SWEEP_TOL = 1e-14
_MAX_SWEEPS = 60


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Return (a + a*) / 2."""
    return (a + a.conj().T) / 2.0


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def require_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {a.shape}")
    return a


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity to relative tolerance and return the complex view."""
    a = require_square(a)
    defect = frobenius(a - a.conj().T)
    if defect > tol * max(1.0, frobenius(a)):
        raise NotHermitianError(
            f"matrix is not Hermitian: ||A - A*||_F = {defect:.3e}"
        )
    return a


@dataclass(frozen=True)
class HermitianEig:
    """Spectral data of a Hermitian matrix.

    ``eigenvalues`` are real and decreasing; column ``j`` of
    ``eigenvectors`` is a unit eigenvector for ``eigenvalues[j]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class RankInfo:
    """Numerical rank of a PSD matrix with its support and null projections."""

    rank: int
    support_projection: np.ndarray
    null_projection: np.ndarray


def hermitian_eig(matrix: np.ndarray, max_sweeps: int = _MAX_SWEEPS) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Pivots traverse the strict upper triangle in row-major order, sweep
    after sweep, until the off-diagonal mass falls below 1e-14 relative
    to the Frobenius norm.  The fixed pivot order makes the output
    reproducible bit for bit; ties between equal eigenvalues keep the
    solver's output order.

    Raises ``NotHermitianError`` for non-Hermitian input and
    ``NoConvergenceError`` if ``max_sweeps`` sweeps do not converge
    (quadratic convergence makes this unreachable in practice).
    """
    a = require_hermitian(matrix)
    n = a.shape[0]
    work = hermitian_part(a)
    vecs = np.eye(n, dtype=np.complex128)
    scale = frobenius(work)
    if n == 1 or scale == 0.0:
        vals = np.real(np.diag(work)).copy()
        return HermitianEig(vals, vecs)

    # rotations below this cannot lift the off-diagonal mass above the target
    tiny = _SWEEP_TOL * scale / (n * n)
    converged = False
    for _ in range(max_sweeps):
        off = frobenius(work - np.diag(np.diag(work)))
        if off <= _SWEEP_TOL * scale:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                absapq = abs(apq)
                if absapq <= tiny:
                    continue
                app = work[p, p].real
                aqq = work[q, q].real
                u = apq / absapq
                tau = (aqq - app) / (2.0 * absapq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array(
                    [[c, s], [-s * np.conj(u), c * np.conj(u)]],
                    dtype=np.complex128,
                )
                work[:, [p, q]] = work[:, [p, q]] @ rot
                work[[p, q], :] = rot.conj().T @ work[[p, q], :]
                vecs[:, [p, q]] = vecs[:, [p, q]] @ rot
                # the pivot is zero by construction; pin it to cut drift
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
    else:
        off = frobenius(work - np.diag(np.diag(work)))
        converged = off <= _SWEEP_TOL * scale
    if not converged:
        raise NoConvergenceError(
            f"Jacobi sweeps exhausted ({max_sweeps}) without convergence"
        )

    vals = np.real(np.diag(work)).copy()
    order = np.argsort(-vals, kind="stable")
    return HermitianEig(vals[order], vecs[:, order])


def _clamped_psd_eig(a: np.ndarray, clamp_tol: float = PSD_CLAMP_TOL) -> HermitianEig:
    """Eigendecomposition with small negative eigenvalues clamped to zero.

    Eigenvalues below ``-clamp_tol * lambda_max`` mean the matrix is not
    PSD and raise ``NotPSDError``; the band [-clamp_tol * lambda_max, 0)
    is floating-point noise and is set to exactly zero.
    """
    eig = hermitian_eig(a)
    vals = eig.eigenvalues.copy()
    lam_max = max(float(vals[0]), 0.0)
    floor = -clamp_tol * max(lam_max, 1e-300)
    if vals[-1] < floor:
        raise NotPSDError(
            f"matrix has negative eigenvalue {vals[-1]:.3e} "
            f"below the clamp threshold {floor:.3e}"
        )
    np.clip(vals, 0.0, None, out=vals)
    vals[vals < EIG_NOISE_FLOOR * lam_max] = 0.0
    return HermitianEig(vals, eig.eigenvectors)


def psd_sqrt(a: np.ndarray, clamp_tol: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Positive semidefinite square root of a PSD matrix."""
    eig = _clamped_psd_eig(a, clamp_tol)
    v = eig.eigenvectors
    return hermitian_part((v * np.sqrt(eig.eigenvalues)) @ v.conj().T)


def support_info(a: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> RankInfo:
    """Numerical rank and support/null projections of a PSD matrix.

    The rank counts eigenvalues above ``rank_tol * lambda_max``; the zero
    operator has rank 0 and a zero support projection.
    """
    eig = _clamped_psd_eig(a)
    vals = eig.eigenvalues
    lam_max = float(vals[0]) if vals.size else 0.0
    rank = int(np.sum(vals > rank_tol * lam_max)) if lam_max > 0.0 else 0
    v = eig.eigenvectors[:, :rank]
    support = hermitian_part(v @ v.conj().T)
    null = np.eye(a.shape[0], dtype=np.complex128) - support
    return RankInfo(rank, support, hermitian_part(null))


def pinv_sqrt(a: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Pseudo-inverse square root: R with R a R = support projection of a."""
    eig = _clamped_psd_eig(a)
    vals = eig.eigenvalues
    lam_max = float(vals[0]) if vals.size else 0.0
    inv = np.zeros_like(vals)
    if lam_max > 0.0:
        keep = vals > rank_tol * lam_max
        inv[keep] = 1.0 / np.sqrt(vals[keep])
    v = eig.eigenvectors
    return hermitian_part((v * inv) @ v.conj().T)


def _strict_pd_eig(a: np.ndarray, rank_tol: float, name: str) -> HermitianEig:
    eig = _clamped_psd_eig(a)
    vals = eig.eigenvalues
    lam_max = float(vals[0]) if vals.size else 0.0
    if lam_max <= 0.0 or vals[-1] <= rank_tol * lam_max:
        raise SingularOperatorError(
            f"{name} operand is not strictly positive definite "
            f"(min/max eigenvalue ratio below rank_tol={rank_tol:.1e})"
        )
    return eig


def geometric_mean(
    a: np.ndarray, b: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Operator geometric mean of two positive definite matrices.

    Returns the unique positive definite G solving G a^{-1} G = b,
    computed as a^{1/2} (a^{-1/2} b a^{-1/2})^{1/2} a^{1/2}.  The mean is
    symmetric in its operands; both must be strictly positive definite.
    """
    eig_a = _strict_pd_eig(a, rank_tol, "first")
    _strict_pd_eig(b, rank_tol, "second")
    v = eig_a.eigenvectors
    root = np.sqrt(eig_a.eigenvalues)
    a_half = (v * root) @ v.conj().T
    a_ihalf = (v * (1.0 / root)) @ v.conj().T
    middle = psd_sqrt(hermitian_part(a_ihalf @ b @ a_ihalf))
    return hermitian_part(a_half @ middle @ a_half)
