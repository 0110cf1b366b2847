"""Exception and warning types shared across the solver modules."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SolverError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically at) a pole of the function."""


class NonConvergenceError(SolverError):
    """A series or iteration exhausted its budget without meeting tolerance."""


class DegenerateParameterError(SolverError):
    """Hypergeometric parameters hit an exactly degenerate (logarithmic) case."""


class SingularMatchingError(SolverError):
    """The continuity system at x = 0 is numerically singular at this energy."""


class SpuriousPoleError(SolverError):
    """A denominator hypergeometric vanished: residual pole, not an eigenvalue."""


class ContinuationStallError(SolverError):
    """Continuation step size underflowed before the branch closed."""


class NoFoldError(SolverError):
    """No particle-antiparticle merge was found in the scanned window."""


class NoRootError(SolverError):
    """A bracketed root search found no sign change."""


class UnitarityViolationError(SolverError):
    """|T + R - 1| exceeded tolerance, usually a too-coarse integration step."""


class SlowDecayWarning(UserWarning):
    """Bound state so close to the continuum edge that truncation is very long."""


class DegenerateParameterWarning(UserWarning):
    """Parameters were perturbed off a near-degenerate hypergeometric case."""
