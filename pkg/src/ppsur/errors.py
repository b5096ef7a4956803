"""Exception hierarchy for ppsur."""


class PPSError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(PPSError):
    pass


class DegenerateInputError(PPSError):
    """Seed vectors are linearly dependent within tolerance."""


class NotHermitianError(PPSError):
    pass


class NotPSDError(PPSError):
    pass


class InvalidStateError(PPSError):
    """A state, density matrix or unitary failed validation."""


class WeakValueUndefinedError(PPSError):
    """Pre- and post-selection are (numerically) orthogonal."""


class ResidualUndefinedError(PPSError):
    """The orthogonal residual direction of a decomposition is undefined."""


class NumericalInconsistencyError(PPSError):
    """A variance radicand came out clearly negative."""


class EqualityIndeterminateError(PPSError):
    pass


class NoPostSelectionError(PPSError):
    """No post-selection with the requested property exists."""


class UnknownObjectiveError(PPSError):
    pass


class InvalidScenarioError(PPSError):
    pass
