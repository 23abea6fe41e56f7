"""Exception hierarchy shared by all modules.

The CLI maps these onto distinct exit codes: usage errors are handled by
argparse (exit 2), DomainError exits 3, ResourceCapError exits 4, and the
remaining integrity/numerical failures exit 1.
"""


class AztecError(Exception):
    """Base class for all library errors."""


class DomainError(AztecError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ResourceCapError(AztecError):
    """A brute-force computation would exceed its configured size cap."""


class TilingIntegrityError(AztecError):
    """A tiling or height function violates its structural invariants."""


class InfeasibleBoundaryError(AztecError):
    """Partial height data admits no extension to a complete height function."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NumericalError(AztecError):
    """An iterative numerical procedure failed to converge."""
