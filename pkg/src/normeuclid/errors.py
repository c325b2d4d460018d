"""Exception types raised across the package."""


class NormEuclidError(Exception):
    """Base class for all package errors."""


class InvalidField(NormEuclidError, ValueError):
    """(ell, f) does not describe a cyclic field of prime degree and prime conductor."""


class SegmentTooLarge(NormEuclidError, ValueError):
    pass


class ZeroClass(NormEuclidError, ValueError):
    """A character argument is divisible by the conductor."""


class NotFound(NormEuclidError, LookupError):
    pass


class InternalInconsistency(NormEuclidError, RuntimeError):
    """A generated object failed its own independent verification."""


class DegenerateWitness(NormEuclidError, ValueError):
    pass


class HypothesisViolation(NormEuclidError, ValueError):
    pass


class DomainViolation(NormEuclidError, ValueError):
    pass


class BetaNormMismatch(NormEuclidError, ValueError):
    pass


class ZeroElement(NormEuclidError, ValueError):
    pass


class Exhaustion(NormEuclidError, RuntimeError):
    pass


class CheckpointMismatch(NormEuclidError, RuntimeError):
    pass
