"""Exception types shared across the toolkit.

Every failure mode that callers are expected to branch on gets its own
class here, so the CLI can map them to stable exit codes.
"""


class FeigenbaumError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(FeigenbaumError):
    """Invalid or inconsistent run configuration."""


class SingularMatrix(FeigenbaumError):
    """A pivot underflowed the singularity tolerance during elimination."""


class ExactlySingular(FeigenbaumError):
    """Exact (rational) elimination met a zero determinant."""


class NoConvergence(FeigenbaumError):
    """An iterative process exhausted its budget.

    Carries ``index`` for eigensolver failures and ``history`` (update
    norms) for Newton failures; either may be None.
    """

    def __init__(self, message, index=None, history=None):
        super().__init__(message)
        self.index = index
        self.history = history


class DivideByZero(FeigenbaumError):
    """A scaling constant is undefined (g(1) = 0 or g(g(0)) = 0)."""


class InvalidIndex(FeigenbaumError):
    """Eigenfunction index outside its admissible range (k = 1)."""


class SingularJacobian(FeigenbaumError):
    """Newton met a degenerate Jacobian: the operator has eigenvalue 1,
    i.e. a one-parameter family of solutions. Pin g(0) to select a member."""


class WrongBranch(FeigenbaumError):
    """Newton converged to a fixed point of a different extremum order."""


class AmbiguousMatch(FeigenbaumError):
    """Two distinct scaling powers both match an eigenvalue."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class NoExplicitForm(FeigenbaumError):
    """No closed-form eigenfunction is known for this operator/index."""


class MissingArtifact(FeigenbaumError):
    """A required input file or field is absent."""
