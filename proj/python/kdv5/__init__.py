"""Fifth-order KdV hierarchy simulator and diagnostics.

Fields are 1-D float64 arrays of samples on x_j = -L/2 + j L / N.
"""

from ._core import (
    DivergenceError,
    Error,
    NumericalError,
    ResourceLimitError,
    ValidationError,
    alpha,
    conserved,
    diffeo_forward,
    diffeo_inverse,
    green_diagonal,
    grid_nodes,
    identity_residuals,
    integrate,
    random_field,
    rhs,
    run_config,
    sobolev_norm,
    study_description,
    study_names,
    validate_config,
)

__all__ = [
    "DivergenceError",
    "Error",
    "NumericalError",
    "ResourceLimitError",
    "ValidationError",
    "alpha",
    "conserved",
    "diffeo_forward",
    "diffeo_inverse",
    "green_diagonal",
    "grid_nodes",
    "identity_residuals",
    "integrate",
    "random_field",
    "rhs",
    "run_config",
    "sobolev_norm",
    "study_description",
    "study_names",
    "validate_config",
]
