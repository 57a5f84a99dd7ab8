"""
Precondition checks shared by the library packages.

Each helper returns the validated (and normalised) value or raises
:class:`~common.utils.exceptions.InvalidParameterError` with a message
naming the constraint.
"""

import math
import numbers

from common.utils.exceptions import InvalidParameterError


def require_int(name: str, value, minimum: int | None = None) -> int:
    """
    Check that ``value`` is an integer, optionally bounded from below.

    Booleans are rejected even though they are ``int`` subclasses.

    :param name: Argument name used in the error message.
    :param value: Value to check.
    :param minimum: Smallest allowed value, or ``None``.
    :returns: ``value`` as a plain ``int``.
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise InvalidParameterError(f"{name} must satisfy {name} >= {minimum}, got {value}")
    return value


def require_real(name: str, value) -> float:
    """Check that ``value`` is a finite real number and return it as ``float``."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidParameterError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value}")
    return value


def require_positive(name: str, value) -> float:
    """Check that ``value`` is a finite real number strictly greater than zero."""
    value = require_real(name, value)
    if value <= 0:
        raise InvalidParameterError(f"{name} must satisfy {name} > 0, got {value}")
    return value


def require_erasure_probability(name: str, value) -> float:
    """Check ``0 <= value < 1`` (an erasure probability of one never delivers)."""
    value = require_real(name, value)
    if not 0.0 <= value < 1.0:
        raise InvalidParameterError(f"{name} must satisfy 0 <= {name} < 1, got {value}")
    return value


def require_seed(name: str, value) -> int:
    """Check that ``value`` fits in a 64-bit unsigned integer."""
    value = require_int(name, value, minimum=0)
    if value >= 2**64:
        raise InvalidParameterError(f"{name} must satisfy {name} < 2**64, got {value}")
    return value
