"""Random domino tilings of Aztec diamonds.

Exact rational local statistics (placement probabilities, creation rates),
their closed-form asymptotic limits (arctangent formula, arctic circle and
ellipse, average height function), a shuffling sampler, a brute-force
enumeration oracle, and Monte Carlo cross-validation of all four against
one another.
"""

__version__ = "0.1.0"

from .errors import (
    AztecError,
    DomainError,
    InfeasibleBoundaryError,
    NumericalError,
    ResourceCapError,
    TilingIntegrityError,
)

__all__ = [
    "AztecError",
    "DomainError",
    "InfeasibleBoundaryError",
    "NumericalError",
    "ResourceCapError",
    "TilingIntegrityError",
    "__version__",
]
