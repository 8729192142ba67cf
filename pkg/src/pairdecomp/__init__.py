"""Partial fidelities and optimal simultaneous decompositions of operator pairs.

A pair of positive semidefinite operators admits privileged simultaneous
decompositions into pure vectors: their index-paired overlaps realize
every partial fidelity of the pair at once, and no other decomposition
pair can do better.  This package computes the fidelity spectrum,
constructs the optimal decompositions (including for singular pairs),
provides majorization utilities with the prescribed-weight converse
construction, and ships randomized oracles that stress every inequality
at desk scale.
"""

from .exceptions import (
    BothZeroError,
    DimensionMismatchError,
    LengthTooShortError,
    MatrixFileError,
    MTooLargeError,
    NegativeEntryError,
    NoConvergenceError,
    NotADecompositionError,
    NotHermitianError,
    NotMajorizedError,
    NotPSDError,
    PairDecompError,
    SingularOperatorError,
    UnequalSupportsError,
)
from .matcore import (
    DEFAULT_RANK_TOL,
    HermitianEig,
    RankInfo,
    geometric_mean,
    hermitian_eig,
    pinv_sqrt,
    psd_sqrt,
    support_info,
)
from .states import (
    Decomposition,
    StateOperator,
    decomposition_from_unitary,
    haar_unitary,
    is_decomposition_of,
    mix,
    overlap_values,
    pad_to_length,
    random_decomposition,
    random_state_operator,
    reconstruct,
    spectral_decomposition,
)
from .fidelity import (
    FidelityProfile,
    fidelity,
    fidelity_spectrum,
    k_fidelity,
    partial_fidelity_plus,
)
from .optimal import (
    GaugePair,
    OptimalPair,
    ReductionStep,
    SupportReductionTrace,
    extrapolate_to_zero,
    gauge_on_common_support,
    optimal_pair,
    optimal_pair_general,
    regularized_profile,
    solve_gauge,
    support_reduction,
    transform_decompositions,
    transform_pair,
)
from .majorize import (
    EqualityCertificate,
    certify_equality,
    first_majorization_violation,
    majorizes,
    nielsen_decomposition,
    pairing_gap,
    partial_sums,
)
from .oracle import (
    SearchReport,
    matching_value,
    max_weight_matching_value,
    random_search,
)

__version__ = "0.1.0"

__all__ = [
    "BothZeroError",
    "Decomposition",
    "DimensionMismatchError",
    "EqualityCertificate",
    "FidelityProfile",
    "GaugePair",
    "HermitianEig",
    "LengthTooShortError",
    "MatrixFileError",
    "MTooLargeError",
    "NegativeEntryError",
    "NoConvergenceError",
    "NotADecompositionError",
    "NotHermitianError",
    "NotMajorizedError",
    "NotPSDError",
    "OptimalPair",
    "PairDecompError",
    "RankInfo",
    "ReductionStep",
    "SearchReport",
    "SingularOperatorError",
    "StateOperator",
    "SupportReductionTrace",
    "UnequalSupportsError",
    "certify_equality",
    "decomposition_from_unitary",
    "extrapolate_to_zero",
    "fidelity",
    "fidelity_spectrum",
    "first_majorization_violation",
    "gauge_on_common_support",
    "geometric_mean",
    "haar_unitary",
    "hermitian_eig",
    "is_decomposition_of",
    "k_fidelity",
    "majorizes",
    "matching_value",
    "max_weight_matching_value",
    "mix",
    "nielsen_decomposition",
    "optimal_pair",
    "optimal_pair_general",
    "overlap_values",
    "pad_to_length",
    "pairing_gap",
    "partial_fidelity_plus",
    "partial_sums",
    "pinv_sqrt",
    "psd_sqrt",
    "random_decomposition",
    "random_search",
    "random_state_operator",
    "reconstruct",
    "regularized_profile",
    "solve_gauge",
    "spectral_decomposition",
    "support_info",
    "support_reduction",
    "transform_decompositions",
    "transform_pair",
    "DEFAULT_RANK_TOL",
]
