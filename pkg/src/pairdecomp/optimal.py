"""Optimal simultaneous decompositions of an operator pair.

The construction gauges (rho, omega) to a common operator tau with an
invertible congruence, reads the optimal vectors off tau's spectral
decomposition, and maps them back.  Pairs without a common support are
first shrunk by alternating support projections; the resulting optimal
vectors are then lifted step by step back to decompositions of the
original operators without losing any pairing value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .exceptions import (
    BothZeroError,
    DimensionMismatchError,
    SingularOperatorError,
    UnequalSupportsError,
)
from .fidelity import FidelityProfile, fidelity_spectrum
from .states import Decomposition, StateOperator, spectral_decomposition

#: congruences with a larger condition number are treated as singular
CONDITION_LIMIT = 1e12

#: absolute Frobenius tolerance for comparing support projections
SUPPORT_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class GaugePair:
    """Invertible gauge X and the common operator tau it produces.

    X omega X* and (X^{-1})* rho X^{-1} both equal tau; X is the positive
    definite Hermitian choice, which fixes the otherwise free unitary
    factor.
    """

    X: np.ndarray
    tau: StateOperator
    working_dim: int


@dataclass(frozen=True)
class OptimalPair:
    """Simultaneously optimal decompositions of rho (psi) and omega (phi).

    ``values[j]`` is the pairing product <psi_j | phi_j>, real and
    decreasing; its partial sums realize every partial fidelity at once,
    and the cross products <psi_k | phi_j> vanish for k != j.
    """

    psi: Decomposition
    phi: Decomposition
    values: np.ndarray


@dataclass(frozen=True)
class ReductionStep:
    """One alternating projection step: which side changed and how."""

    side: str
    projector: np.ndarray
    rank_after: int
    operator_before: StateOperator


@dataclass(frozen=True)
class SupportReductionTrace:
    """Recorded steps of the alternating support reduction with its endpoint."""

    steps: tuple
    final_rho: StateOperator
    final_omega: StateOperator


def solve_gauge(
    rho: StateOperator, omega: StateOperator, rank_tol: float = matcore.DEFAULT_RANK_TOL
) -> GaugePair:
    """Gauge a strictly positive pair to a common operator.

    X squared is omega^{-1/2} (omega^{1/2} rho omega^{1/2})^{1/2}
    omega^{-1/2}; taking X as the PSD square root of that product makes X
    Hermitian, so a single matrix serves as gauge and adjoint.
    """
    if rho.dim != omega.dim:
        raise DimensionMismatchError(f"operator dims differ: {rho.dim} vs {omega.dim}")
    eig_w = matcore._strict_pd_eig(omega.matrix, rank_tol, "omega")
    matcore._strict_pd_eig(rho.matrix, rank_tol, "rho")
    v = eig_w.eigenvectors
    root = np.sqrt(eig_w.eigenvalues)
    w_half = (v * root) @ v.conj().T
    w_ihalf = (v * (1.0 / root)) @ v.conj().T
    inner = matcore.psd_sqrt(matcore.hermitian_part(w_half @ rho.matrix @ w_half))
    squared = matcore.hermitian_part(w_ihalf @ inner @ w_ihalf)
    x = matcore.psd_sqrt(squared)
    tau = StateOperator(matcore.hermitian_part(x @ omega.matrix @ x))
    return GaugePair(x, tau, rho.dim)


def _support_basis(
    operator: StateOperator, rank_tol: float
) -> tuple[np.ndarray, int]:
    """Orthonormal basis (columns) of the support, with the numerical rank."""
    eig = matcore._clamped_psd_eig(operator.matrix)
    vals = eig.eigenvalues
    lam_max = float(vals[0]) if vals.size else 0.0
    rank = int(np.sum(vals > rank_tol * lam_max)) if lam_max > 0.0 else 0
    return eig.eigenvectors[:, :rank], rank


def optimal_pair(
    rho: StateOperator, omega: StateOperator, rank_tol: float = matcore.DEFAULT_RANK_TOL
) -> OptimalPair:
    """Optimal simultaneous decompositions for a pair with equal supports.

    Works on the common support subspace, so the operators may be rank
    deficient as long as their supports coincide; use
    ``optimal_pair_general`` otherwise.
    """
    if rho.dim != omega.dim:
        raise DimensionMismatchError(f"operator dims differ: {rho.dim} vs {omega.dim}")
    basis, rank = _support_basis(rho, rank_tol)
    basis_w, rank_w = _support_basis(omega, rank_tol)
    proj_r = basis @ basis.conj().T
    proj_w = basis_w @ basis_w.conj().T
    if rank != rank_w or matcore.frobenius(proj_r - proj_w) > SUPPORT_MATCH_TOL:
        raise UnequalSupportsError(
            f"supports differ (ranks {rank} vs {rank_w}); use optimal_pair_general"
        )
    if rank == 0:
        empty = Decomposition(np.zeros((0, rho.dim), dtype=np.complex128))
        return OptimalPair(empty, empty, np.zeros(0))

    rho_s = StateOperator(matcore.hermitian_part(basis.conj().T @ rho.matrix @ basis))
    omega_s = StateOperator(matcore.hermitian_part(basis.conj().T @ omega.matrix @ basis))
    gauge = solve_gauge(rho_s, omega_s, rank_tol)
    eig_tau = matcore._clamped_psd_eig(gauge.tau.matrix)
    chi = eig_tau.eigenvectors * np.sqrt(eig_tau.eigenvalues)  # columns

    x = gauge.X
    psi_cols = basis @ (x @ chi)
    phi_cols = basis @ np.linalg.solve(x, chi)
    return OptimalPair(
        Decomposition(psi_cols.T),
        Decomposition(phi_cols.T),
        eig_tau.eigenvalues.copy(),
    )


def support_reduction(
    rho: StateOperator, omega: StateOperator, rank_tol: float = matcore.DEFAULT_RANK_TOL
) -> SupportReductionTrace:
    """Shrink a pair of PSD operators to equal supports by alternating projections.

    Alternates rho <- Q rho Q (Q the support of the current omega) and
    omega <- P omega P (P the support of the current rho) until the
    supports agree; a step is recorded only when it actually changes the
    operator.  The alternation ends after finitely many steps, or raises
    ``BothZeroError`` when it annihilates both operators (orthogonally
    supported input).
    """
    if rho.dim != omega.dim:
        raise DimensionMismatchError(f"operator dims differ: {rho.dim} vs {omega.dim}")
    if rho.is_zero() and omega.is_zero():
        raise BothZeroError("both operators are zero")
    cur_r, cur_w = rho, omega
    steps: list[ReductionStep] = []
    rho_turn = True
    for _ in range(2 * rho.dim + 4):
        info_r = matcore.support_info(cur_r.matrix, rank_tol)
        info_w = matcore.support_info(cur_w.matrix, rank_tol)
        if info_r.rank == 0 and info_w.rank == 0:
            raise BothZeroError("support reduction annihilated both operators")
        if (
            info_r.rank == info_w.rank
            and matcore.frobenius(info_r.support_projection - info_w.support_projection)
            <= SUPPORT_MATCH_TOL
        ):
            return SupportReductionTrace(tuple(steps), cur_r, cur_w)
        if rho_turn:
            q = info_w.support_projection
            new_r = StateOperator(matcore.hermitian_part(q @ cur_r.matrix @ q))
            if not _unchanged(cur_r, new_r):
                rank_after = matcore.support_info(new_r.matrix, rank_tol).rank
                steps.append(ReductionStep("rho", q, rank_after, cur_r))
            cur_r = new_r
        else:
            p = info_r.support_projection
            new_w = StateOperator(matcore.hermitian_part(p @ cur_w.matrix @ p))
            if not _unchanged(cur_w, new_w):
                rank_after = matcore.support_info(new_w.matrix, rank_tol).rank
                steps.append(ReductionStep("omega", p, rank_after, cur_w))
            cur_w = new_w
        rho_turn = not rho_turn
    raise RuntimeError("support reduction failed to terminate")  # unreachable


def _unchanged(before: StateOperator, after: StateOperator) -> bool:
    gap = matcore.frobenius(after.matrix - before.matrix)
    return gap <= SUPPORT_MATCH_TOL * max(1.0, matcore.frobenius(before.matrix))


def _psd_factor(operator: StateOperator, rank_tol: float) -> np.ndarray:
    """Factor A (d x rank) with A A* = operator, columns scaled eigenvectors."""
    eig = matcore._clamped_psd_eig(operator.matrix)
    vals = eig.eigenvalues
    lam_max = float(vals[0]) if vals.size else 0.0
    keep = vals > rank_tol * lam_max if lam_max > 0.0 else np.zeros_like(vals, bool)
    return eig.eigenvectors[:, keep] * np.sqrt(vals[keep])


def _lift_through_projection(
    vectors: np.ndarray,
    target: StateOperator,
    projector: np.ndarray,
    rank_tol: float,
) -> np.ndarray:
    """Extend a decomposition of Q target Q to one of target itself.

    Input rows chi_j decompose Q target Q.  The output rows psi_j satisfy
    Q psi_j = chi_j for the original rows and Q psi_j = 0 for any
    appended rows, while reconstructing target exactly.  Writing target
    = A A* with an injective factor A, every decomposition of target is
    A w_j with the w_j forming an isometry; the forced components of w_j
    are read off an SVD of Q A and the free components are completed to
    an isometry, which may require appending rows.
    """
    a = _psd_factor(target, rank_tol)  # (dim, r)
    r = a.shape[1]
    b = projector @ a
    u, s, vh = np.linalg.svd(b, full_matrices=False)
    k = int(np.sum(s > np.sqrt(rank_tol) * s[0])) if s.size and s[0] > 0.0 else 0
    n = vectors.shape[0]
    forced = (vectors @ u[:, :k].conj()) / s[:k]  # rows: forced components of z_j
    free = r - k
    top = np.vstack([forced, np.zeros((free, k), dtype=np.complex128)])
    if free > 0:
        qc, _ = np.linalg.qr(top, mode="complete")
        z = np.hstack([top, qc[:, k : k + free]])
    else:
        z = top
    w = z @ vh.conj()
    return w @ a.T


def _pad_rows(vectors: np.ndarray, length: int) -> np.ndarray:
    if vectors.shape[0] >= length:
        return vectors
    extra = np.zeros((length - vectors.shape[0], vectors.shape[1]), dtype=np.complex128)
    return np.vstack([vectors, extra])


def optimal_pair_general(
    rho: StateOperator, omega: StateOperator, rank_tol: float = matcore.DEFAULT_RANK_TOL
) -> OptimalPair:
    """Optimal simultaneous decompositions for arbitrary PSD pairs.

    Reduces the pair to a common support, solves there, then lifts the
    vectors back through the recorded projection steps in reverse order.
    Each lift preserves every pairing product; vectors appended on one
    side are paired with zero vectors on the other, contributing zero.
    Orthogonally supported pairs yield all-zero values with the spectral
    decompositions of the inputs.
    """
    if rho.dim != omega.dim:
        raise DimensionMismatchError(f"operator dims differ: {rho.dim} vs {omega.dim}")
    dim = rho.dim
    try:
        trace = support_reduction(rho, omega, rank_tol)
    except BothZeroError:
        psi = spectral_decomposition(rho, rank_tol)
        phi = spectral_decomposition(omega, rank_tol)
        return OptimalPair(psi, phi, np.zeros(dim))

    core = optimal_pair(trace.final_rho, trace.final_omega, rank_tol)
    psi_rows = core.psi.vectors
    phi_rows = core.phi.vectors
    for step in reversed(trace.steps):
        if step.side == "rho":
            psi_rows = _lift_through_projection(
                psi_rows, step.operator_before, step.projector, rank_tol
            )
        else:
            phi_rows = _lift_through_projection(
                phi_rows, step.operator_before, step.projector, rank_tol
            )
    length = max(psi_rows.shape[0], phi_rows.shape[0], dim)
    psi_rows = _pad_rows(psi_rows, length)
    phi_rows = _pad_rows(phi_rows, length)
    values = np.zeros(length)
    values[: core.values.size] = core.values
    return OptimalPair(Decomposition(psi_rows), Decomposition(phi_rows), values)


def gauge_on_common_support(
    rho: StateOperator, omega: StateOperator, rank_tol: float = matcore.DEFAULT_RANK_TOL
) -> GaugePair:
    """Gauge of the support-reduced pair, embedded back into the full space.

    The returned X acts as the reduced gauge on the common support and as
    the identity on its orthogonal complement; tau is the embedded common
    operator.  For pairs that already share a support this coincides with
    ``solve_gauge`` on that support.  Raises ``BothZeroError`` for
    orthogonally supported pairs.
    """
    trace = support_reduction(rho, omega, rank_tol)
    basis, rank = _support_basis(trace.final_rho, rank_tol)
    rho_s = StateOperator(
        matcore.hermitian_part(basis.conj().T @ trace.final_rho.matrix @ basis)
    )
    omega_s = StateOperator(
        matcore.hermitian_part(basis.conj().T @ trace.final_omega.matrix @ basis)
    )
    reduced = solve_gauge(rho_s, omega_s, rank_tol)
    projection = basis @ basis.conj().T
    complement = np.eye(rho.dim, dtype=np.complex128) - projection
    x_full = basis @ reduced.X @ basis.conj().T + complement
    tau_full = StateOperator(
        matcore.hermitian_part(basis @ reduced.tau.matrix @ basis.conj().T)
    )
    return GaugePair(x_full, tau_full, rank)


def _checked_inverse(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {x.shape}")
    s = np.linalg.svd(x, compute_uv=False)
    if s[-1] <= 0.0 or s[0] / s[-1] > CONDITION_LIMIT:
        raise SingularOperatorError(
            f"matrix is numerically singular (condition above {CONDITION_LIMIT:.0e})"
        )
    return np.linalg.inv(x)


def transform_pair(
    rho: StateOperator, omega: StateOperator, x: np.ndarray
) -> tuple[StateOperator, StateOperator]:
    """Congruence pair map (rho, omega) -> (X rho X*, (X^{-1})* omega X^{-1}).

    The fidelity spectrum of the pair is invariant under this map for
    every invertible X.
    """
    x_inv = _checked_inverse(x)
    new_rho = StateOperator(matcore.hermitian_part(x @ rho.matrix @ x.conj().T))
    new_omega = StateOperator(
        matcore.hermitian_part(x_inv.conj().T @ omega.matrix @ x_inv)
    )
    return new_rho, new_omega


def transform_decompositions(
    psi: Decomposition, phi: Decomposition, x: np.ndarray
) -> tuple[Decomposition, Decomposition]:
    """Map psi_j -> X psi_j and phi_j -> (X^{-1})* phi_j.

    All cross inner products <psi_j | phi_k> are unchanged, and the
    outputs decompose the transformed pair of the reconstructed
    operators.
    """
    if psi.dim != phi.dim:
        raise DimensionMismatchError(f"decomposition dims differ: {psi.dim} vs {phi.dim}")
    x_inv = _checked_inverse(x)
    new_psi = Decomposition(psi.vectors @ x.T)
    new_phi = Decomposition(phi.vectors @ x_inv.conj())
    return new_psi, new_phi


def regularized_profile(
    rho: StateOperator,
    omega: StateOperator,
    c: float,
    rank_tol: float = matcore.DEFAULT_RANK_TOL,
) -> FidelityProfile:
    """Fidelity spectrum of (rho + c P0, omega + c Q0) with null projections P0, Q0.

    As c decreases to zero the profile approaches the profile of the
    original pair; for strictly positive pairs it is already identical.
    """
    if c <= 0.0:
        raise ValueError(f"regularization constant must be positive, got {c}")
    p0 = matcore.support_info(rho.matrix, rank_tol).null_projection
    q0 = matcore.support_info(omega.matrix, rank_tol).null_projection
    reg_rho = StateOperator(rho.matrix + c * p0)
    reg_omega = StateOperator(omega.matrix + c * q0)
    return fidelity_spectrum(reg_rho, reg_omega)


def extrapolate_to_zero(nodes, samples) -> float:
    """Polynomial (Neville) extrapolation of samples f(h) to h = 0.

    Used with h = sqrt(c) for the regularization path, whose profile is
    analytic in sqrt(c) away from eigenvalue crossings.
    """
    h = [float(v) for v in nodes]
    table = [float(v) for v in samples]
    if len(h) != len(table) or not h:
        raise ValueError("nodes and samples must have equal nonzero length")
    n = len(h)
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (h[i] * table[i + 1] - h[i + level] * table[i]) / (
                h[i] - h[i + level]
            )
    return table[0]
