"""Fidelity spectrum and the partial fidelity families.

The fidelity spectrum of a pair (rho, omega) is the decreasing list of
eigenvalues of (sqrt(rho) omega sqrt(rho))^{1/2}.  Partial sums of the
spectrum give the increasing family F+_m; the complementary tail sums
give the k-fidelities F_k = F - F+_k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .exceptions import DimensionMismatchError
from .states import StateOperator, as_state


@dataclass(frozen=True)
class FidelityProfile:
    """Decreasing fidelity spectrum plus its cumulative sums.

    ``cumulative[m]`` is the sum of the m largest spectrum values for
    m = 0..d; index 0 is exactly zero and index d is the full fidelity.
    """

    sigma: np.ndarray
    cumulative: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.sigma.size)

    @property
    def fidelity(self) -> float:
        return float(self.cumulative[-1])

    def partial(self, m: int) -> float:
        """Sum of the m largest spectrum values; clamped into [0, d]."""
        if m < 0:
            raise ValueError(f"m must be nonnegative, got {m}")
        return float(self.cumulative[min(m, self.dim)])

    def tail(self, k: int) -> float:
        """Sum of all but the k largest spectrum values."""
        return self.fidelity - self.partial(k)


def fidelity_spectrum(rho, omega) -> FidelityProfile:
    """Fidelity spectrum of a pair of PSD operators.

    Both operands may be singular; matrices passed as plain arrays are
    validated (Hermitian, PSD) first.
    """
    r = as_state(rho)
    w = as_state(omega)
    if r.dim != w.dim:
        raise DimensionMismatchError(f"operator dims differ: {r.dim} vs {w.dim}")
    root = matcore.psd_sqrt(r.matrix)
    inner = matcore.hermitian_part(root @ w.matrix @ root)
    eig = matcore._clamped_psd_eig(inner)
    sigma = np.sqrt(eig.eigenvalues)
    cumulative = np.concatenate([[0.0], np.cumsum(sigma)])
    return FidelityProfile(sigma, cumulative)


def partial_fidelity_plus(rho, omega, m: int) -> float:
    """Sum of the m largest fidelity-spectrum values (0 for m = 0, F for m >= d)."""
    return fidelity_spectrum(rho, omega).partial(m)


def fidelity(rho, omega) -> float:
    """Trace of (sqrt(rho) omega sqrt(rho))^{1/2}; symmetric in its arguments."""
    return fidelity_spectrum(rho, omega).fidelity


def k_fidelity(rho, omega, k: int) -> float:
    """Sum of all but the k largest fidelity-spectrum values."""
    return fidelity_spectrum(rho, omega).tail(k)
