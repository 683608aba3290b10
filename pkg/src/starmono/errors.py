"""Exception hierarchy shared across the package."""


class StarmonoError(Exception):
    """Base class for all package errors."""


class ValidationError(StarmonoError):
    """Bad input data (wrong shapes, orderings, parameter values)."""


class FiniteDynkin(ValidationError):
    """The leg profile describes a finite Dynkin diagram (or a degenerate star)."""


class ShapeMismatch(ValidationError):
    pass


class NotAffine(ValidationError):
    pass


class ZeroParameter(ValidationError):
    pass


class SpecMismatch(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class BadOrdering(ValidationError):
    pass


class DeltaTooLarge(ValidationError):
    pass


class NotD4(ValidationError):
    pass


class SumNotZero(ValidationError):
    pass


class RelationResidualTooLarge(ValidationError):
    pass


class NonGenericParameters(ValidationError):
    """Parameters sit on (or suspiciously near) a documented degeneracy locus."""


class ObstructionError(StarmonoError):
    """A necessary condition of a Deligne-Simpson problem fails."""


class NonZeroHbar(ObstructionError):
    pass


class TraceObstruction(ObstructionError):
    pass


class DetObstruction(ObstructionError):
    pass


class NumericalError(StarmonoError):
    """Numerical procedure failed to reach its target quality."""


class NoConvergence(NumericalError):
    def __init__(self, message, best_residual=None, state=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.state = state


class RankAmbiguous(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class ToleranceNotMet(NumericalError):
    pass


class ContinuationStall(NumericalError):
    pass


class PathTooCoarse(NumericalError):
    pass


class CertificationError(StarmonoError):
    """A property that should hold mathematically failed beyond tolerance."""


class EmptySubspace(CertificationError):
    pass


class NotInvariant(CertificationError):
    pass


class WrongIsotypicDimension(CertificationError):
    pass
