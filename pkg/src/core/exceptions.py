"""
Error hierarchy.

Every error carries a stable ``code`` that the CLI prints on failure.
"""


class SeifertSpectralError(Exception):
    """Base class for all library errors."""

    code = "internal-error"


class InvalidFiberOrderError(SeifertSpectralError, ValueError):
    code = "invalid-fiber-order"


class InvalidSurgeryDataError(SeifertSpectralError, ValueError):
    code = "invalid-surgery-data"


class IncompatibleAlgebraError(SeifertSpectralError, ValueError):
    code = "incompatible-algebra"


class DomainError(SeifertSpectralError, ValueError):
    code = "domain-error"


class NonIntegerGenusError(SeifertSpectralError):
    code = "non-integer-genus"


class ClassificationFailureError(SeifertSpectralError):
    code = "classification-failure"


class NoFiniteMinimalOrbitError(SeifertSpectralError):
    code = "no-finite-minimal-orbit"


class BranchConventionError(SeifertSpectralError):
    code = "branch-convention-failure"


class PoleEvaluationError(SeifertSpectralError, ValueError):
    code = "pole-evaluation"


class BranchTrackingError(SeifertSpectralError):
    code = "branch-tracking-failure"


class InvalidTorusLabelError(SeifertSpectralError, ValueError):
    code = "invalid-torus-label"


class SolverFailureError(SeifertSpectralError):
    code = "solver-failure"


class ConstraintInfeasibleError(SeifertSpectralError):
    code = "constraint-infeasible"


class DegenerateBranchPointError(SeifertSpectralError):
    code = "degenerate-branch-point"


class QuadratureFailureError(SeifertSpectralError):
    code = "quadrature-failure"


class PrecisionFailureError(SeifertSpectralError):
    code = "precision-failure"


class DiagnosticWindowError(SeifertSpectralError, ValueError):
    code = "diagnostic-window-error"
