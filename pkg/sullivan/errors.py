"""
sullivan.errors – exception hierarchy shared by every module.

Mathematical check failures are reported through report objects; these
exceptions signal misuse or a broken invariant.
"""

from __future__ import annotations


class SullivanError(RuntimeError):
    """Root of every error raised by the engine."""


class DegreeCapError(SullivanError):
    """A term or basis request lies above the degree cap."""


class UnknownGeneratorError(SullivanError):
    """Reference to a generator that is not in the table."""


class InconsistentComplexError(SullivanError):
    """A subspace vector lies outside the ambient span."""


class ModelError(SullivanError):
    """Malformed model or out-of-order construction step."""


class NotACocycleError(SullivanError):
    """class_of() called on an element with nonzero differential."""


class ExtensionError(SullivanError):
    """Stage-by-stage morphism extension hit an impossible defect."""


class MorphismError(SullivanError):
    """Degree violation or non-invertible linear part."""


class PresentationError(SullivanError):
    """Group presentation could not be parsed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line   = line
        self.column = column


class SingularMatrixError(SullivanError):
    """Exact inverse requested for a singular matrix."""
