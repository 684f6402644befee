"""
Error classes for neutralldp.

Every error carries a ``payload`` dict with machine-readable context. The three
families below map onto the CLI exit codes (see :mod:`neutralldp.runner.run`).
"""

__all__ = [
    "Error",
    "InputError",
    "NonPositiveInput",
    "NonIntegerInput",
    "NonAlignedHorizon",
    "IndexOutOfRange",
    "MissingConstant",
    "DimensionMismatch",
    "NonAlignedFreeze",
    "NonPositiveR",
    "PreconditionViolated",
    "NonPositiveTerm",
    "ConfigError",
    "ParseError",
    "ValidationError",
    "NumericalError",
    "NoConvergence",
    "SingularSigma",
    "NotConverged",
    "OutputError",
]


class Error(Exception):
    """
    A generic neutralldp Error.

    :ivar dict payload: arbitrary data
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args)
        self.payload = dict(kwargs)


class InputError(Error):
    """An Error signalling that arguments violate an operation's preconditions."""

    pass


class NonPositiveInput(InputError):
    """A mesh parameter that must be positive is not."""

    pass


class NonIntegerInput(NonPositiveInput):
    """A mesh parameter that must be a whole number is not."""

    pass


class NonAlignedHorizon(InputError):
    """The horizon T is not an integer multiple of the mesh step."""

    pass


class IndexOutOfRange(InputError):
    """A time index addresses a window outside [-tau, T]."""

    pass


class MissingConstant(InputError):
    """The coefficient set does not declare the constant an assumption check needs."""

    pass


class DimensionMismatch(InputError):
    """Arrays or functionals disagree on the state dimension d."""

    pass


class NonAlignedFreeze(InputError):
    """1/n is not an integer multiple of the mesh step."""

    pass


class NonPositiveR(InputError):
    """A truncation radius R <= 0 was requested."""

    pass


class PreconditionViolated(InputError):
    """An inequality's precondition does not hold for the supplied constants."""

    pass


class NonPositiveTerm(InputError):
    """A term that enters a logarithm is not strictly positive."""

    pass


class ConfigError(InputError):
    """An Error signalling that an experiment config is invalid."""

    pass


class ParseError(ConfigError):
    """
    The config bytes could not be parsed.
    This error's payload has ``line`` and ``column`` keys (1-based, may be None).
    """

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}", line=line, column=column)


class ValidationError(ConfigError):
    """
    The config parsed but violates the schema.
    This error's payload has a ``violations`` key: a list of ``{"field", "message"}``.
    """

    def __init__(self, violations):
        lines = "\n".join(f"  {v['field']}: {v['message']}" for v in violations)
        super().__init__(f"Invalid config:\n{lines}", violations=list(violations))

    @property
    def fields(self):
        return [v["field"] for v in self.payload["violations"]]


class NumericalError(Error):
    """An Error signalling that a numerical procedure failed."""

    pass


class NoConvergence(NumericalError):
    """The neutral fixed-point iteration did not reach its tolerance (H2 violated?)."""

    pass


class SingularSigma(NumericalError):
    """The diffusion matrix (or the oracle's normal matrix) is singular."""

    pass


class NotConverged(NumericalError):
    """The rate optimiser finished without meeting its convergence criteria."""

    pass


class OutputError(Error):
    """Results could not be written to the requested location."""

    pass
