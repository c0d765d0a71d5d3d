"""Exception and warning types shared by all modules."""


class ComputationError(RuntimeError):
    """Base class for numerical failures inside the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the domain where a relation is defined."""


class FitError(ComputationError):
    """A least-squares fit did not converge.

    ``best`` carries the best-so-far parameter set and ``residual`` its RMS
    misfit, so callers can still inspect a failed fit.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class IntegrationAccuracyError(ComputationError):
    """The fixed integrator step is too coarse for the requested accuracy."""


class InversionError(ComputationError):
    """A spectroscopic inversion produced a non-physical value."""


class DispersiveApproximationWarning(UserWarning):
    """Operating point is too close to a pole of the dispersive expression."""


class ResonantLimitWarning(UserWarning):
    """Zero qubit-resonator detuning; the resonant-limit formula was used."""


class ResolutionWarning(UserWarning):
    """The sampled window is too short to resolve the requested feature."""
