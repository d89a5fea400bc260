"""Flux reconstruction operators and filter families on quadrilaterals."""

from ._core import (
    BasisKind,
    DomainError,
    Error,
    UnstableScheme,
    UnsupportedConfiguration,
    __version__,
    basis_modes,
    check_stability,
    correction_matrix,
    derive_q_family,
    git_blob_hash,
    operators,
    order_of_accuracy,
    parse_basis,
    run_advection,
    solution_points,
)

__all__ = [
    "BasisKind",
    "DomainError",
    "Error",
    "UnstableScheme",
    "UnsupportedConfiguration",
    "__version__",
    "basis_modes",
    "check_stability",
    "correction_matrix",
    "derive_q_family",
    "git_blob_hash",
    "operators",
    "order_of_accuracy",
    "parse_basis",
    "run_advection",
    "solution_points",
]
