"""Exception hierarchy shared by all modules."""


class NormUnitsError(Exception):
    pass


class SizeLimitError(NormUnitsError):
    """An operation was asked to work on a group above its configured cap."""


class ValidationError(NormUnitsError):
    """A multiplication table does not satisfy the group axioms."""


class DomainError(NormUnitsError):
    """Input lies outside the mathematical domain of an operation."""


class ParseError(NormUnitsError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EnumerationError(NormUnitsError):
    """Coset enumeration exceeded its cap before closing."""


class PreconditionError(NormUnitsError):
    """Hypotheses of a lemma do not hold; the check is not applicable."""


class AnomalyError(NormUnitsError):
    """A result contradicting a proved statement (e.g. a missing witness)."""
