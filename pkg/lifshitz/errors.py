from __future__ import annotations


class LifshitzError(Exception):
    """Base exception for lifshitz."""


class DomainError(LifshitzError, ValueError):
    """Raised when an argument lies outside the mathematical domain of an operation."""


class DivergentStaticLimitError(DomainError):
    """Raised when a metallic model is evaluated at zero frequency."""


class MaterialLibraryError(LifshitzError):
    """Raised when a material library cannot be parsed or validated."""


class UnknownMaterialError(MaterialLibraryError, KeyError):
    """Raised when a material name does not resolve in the library."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown material"


class ConfigError(LifshitzError):
    """Raised when a run configuration is malformed."""


class NoLevitationError(LifshitzError):
    """Raised when the free energy does not cross from attraction to repulsion.

    ``converged`` is False when any energy sampled in the bracket hit the
    Matsubara cap, so the missing crossing may be a truncation artefact.
    """

    def __init__(self, message: str, *, converged: bool = True) -> None:
        super().__init__(message)
        self.converged = converged


class OutputError(LifshitzError):
    """Raised when result artefacts cannot be written."""
