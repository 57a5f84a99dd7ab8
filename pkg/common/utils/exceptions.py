"""
Exception hierarchy shared by all packages.

Every error raised on purpose derives from :class:`AoIError`, so the CLI can
turn it into an ``{"error": ...}`` message and a usage exit code.
"""


class AoIError(Exception):
    """Base class for errors raised by this project."""


class InvalidParameterError(AoIError, ValueError):
    """A precondition on an argument is violated.

    The message names the violated constraint.
    """


class TruncationError(AoIError, ArithmeticError):
    """A certified infinite sum or scan did not converge in the allowed rounds."""


class CltUnavailableError(AoIError):
    """The CLT threshold needs ln(2k/(pi*delta)) with a non-positive argument."""


class VacuousBoundError(AoIError):
    """beta_k >= 1, so the optimized-age bound carries no information."""


class SimulationError(AoIError, RuntimeError):
    """A simulation run could not produce an age estimate."""
