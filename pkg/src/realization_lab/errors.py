"""Exception hierarchy shared by all modules."""


class RealizationLabError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(RealizationLabError, ValueError):
    """Matrix shapes are inconsistent or an input is empty/non-finite."""


class PreconditionError(RealizationLabError, ValueError):
    """An operation was called on an input outside its domain."""


class PoleEvaluationError(PreconditionError):
    """Transfer function evaluated too close to an eigenvalue of A."""


class SingularBridgeError(PreconditionError):
    """``lambda*I - D`` is numerically singular."""


class SingularFamilyError(PreconditionError):
    """The realization matrix is singular, so no inverse family member exists."""


class NumericalBreakdown(RealizationLabError, RuntimeError):
    """A randomized construction or tolerance-based decision failed."""


class InvariantFailure(NumericalBreakdown):
    """A relation that holds in exact arithmetic was violated numerically."""


class NoGainFound(RealizationLabError):
    """Gain escalation exhausted without separating the spectra.

    This is a verdict rather than a malfunction: for a non-minimal
    realization no such gain exists.
    """

    def __init__(self, message, last_eta=None, persistent=None):
        super().__init__(message)
        self.last_eta = last_eta
        self.persistent = persistent
