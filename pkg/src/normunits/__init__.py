"""Exponents of normalized unit groups of modular group algebras of finite 2-groups."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AnomalyError,
    DomainError,
    EnumerationError,
    NormUnitsError,
    ParseError,
    PreconditionError,
    SizeLimitError,
    ValidationError,
)

__all__ = [
    "AnomalyError", "DomainError", "EnumerationError", "NormUnitsError", "ParseError",
    "PreconditionError", "SizeLimitError", "ValidationError", "__version__",
]
