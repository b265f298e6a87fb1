"""Exception types raised by the simulation pipeline."""


class EitNoiseError(Exception):
    """Base class for all package-specific errors."""


class ScenarioError(EitNoiseError):
    """Malformed scenario or grid file (bad JSON, unknown keys, bad types)."""


class DegenerateSteadyState(EitNoiseError):
    """Both Rabi frequencies vanish; the ground manifold gives a continuum
    of stationary states and no unique linearization point exists."""


class NoConvergence(EitNoiseError):
    """The stationary-state root solve failed to reach tolerance."""


class NonStationaryState(EitNoiseError):
    """A fluctuation matrix was requested around a non-stationary point."""


class EigenFailure(EitNoiseError):
    """The eigensolver did not converge on the drift matrix."""


class SingularLyapunov(EitNoiseError):
    """The drift matrix has an eigenvalue pair summing to zero, so the
    stationary-covariance equation is singular."""


class SingularAtFrequency(EitNoiseError):
    """The shifted drift matrix is numerically singular at the requested
    spectrum frequency."""


class NoExtrema(EitNoiseError):
    """The noise spectrum is monotone on the scanned range."""


class ClosedFormUnavailable(EitNoiseError):
    """Closed-form reference spectra require the symmetric parameter regime
    with a coherent pump input."""


class ClosedFormDomainError(EitNoiseError):
    """The closed-form denominator vanished at the requested frequency."""
