"""Exception types shared across the package."""


class SynphiError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(SynphiError, ValueError):
    """An argument violates an operation's contract."""


class UnknownVariableError(SynphiError, KeyError):
    """A variable or channel name does not exist in the given container."""


class LengthError(SynphiError, ValueError):
    """A sequence is too short, or lengths are inconsistent."""


class CardinalityError(SynphiError, ValueError):
    """The requested symbol cardinality cannot be realised from the data."""


class DegenerateChannelError(SynphiError, ValueError):
    """A channel carries no variance (constant signal)."""


class DegenerateCovarianceError(SynphiError):
    """A covariance (sub)matrix is singular or numerically near-singular."""


class InternalConsistencyError(SynphiError):
    """A quantity violated a mathematical bound beyond numerical tolerance.

    This signals a bug or corrupted input, not ordinary estimation noise.
    """


class ParseError(SynphiError, ValueError):
    """A data file could not be parsed."""


class AnalysisError(SynphiError):
    """An analysis run could not produce any result."""


class ConvergenceWarning(UserWarning):
    """An iterative solver stopped before reaching its target residual."""
