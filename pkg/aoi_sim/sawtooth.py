"""
Exact integration of the age sawtooth.

The age rises with slope one and drops at each delivery to the age of the
delivered update, so the area under it is a sum of trapezoids. Two
independent routes compute it:

- :func:`integrate_sawtooth` walks the delivery instants of any sample path;
- the per-scheme polygon sums (:func:`iir_polygon_area`,
  :func:`multi_polygon_area`, :func:`fr_slot_areas`) use the decomposition
  into one polygon per update (IIR) or per packet slot (FR).

No time sampling is involved; both are exact up to rounding.
"""

import math

import numpy as np

from common.utils.exceptions import InvalidParameterError


def integrate_sawtooth(delivery_times, generation_times, end_time: float, initial_age: float = 0.0) -> float:
    """
    Area under the age process on ``[0, end_time]``.

    :param delivery_times: Increasing delivery instants in ``[0, end_time]``.
    :param generation_times: Generation instant of each delivered update.
    :param end_time: End of the observation window.
    :param initial_age: Age at time ``0``.
    """
    deliveries = np.asarray(delivery_times, dtype=float)
    generations = np.asarray(generation_times, dtype=float)
    if deliveries.shape != generations.shape:
        raise InvalidParameterError("delivery_times and generation_times must have the same length")
    times = np.concatenate(([0.0], deliveries, [float(end_time)]))
    lengths = np.diff(times)
    if np.any(lengths < 0):
        raise InvalidParameterError("delivery times must be increasing and within [0, end_time]")
    start_ages = np.concatenate(([float(initial_age)], deliveries - generations))
    return math.fsum(lengths * (2.0 * start_ages + lengths) / 2.0)


def iir_polygon_area(x: np.ndarray, x0: float) -> float:
    """Sum of ``X_{i-1} X_i + X_i^2/2`` over updates, with ``X_0 = x0``."""
    x = np.asarray(x, dtype=float)
    previous = np.concatenate(([float(x0)], x[:-1]))
    return math.fsum(previous * x + x * x / 2.0)


def iir_sample_path(x: np.ndarray, x0: float):
    """Delivery and generation instants, end time and initial age of an IIR path."""
    x = np.asarray(x, dtype=float)
    completions = np.cumsum(x)
    starts = np.concatenate(([0.0], completions[:-1]))
    return completions, starts, float(completions[-1]), float(x0)


def multi_polygon_area(y: np.ndarray, x1: np.ndarray, y0: float) -> float:
    """Sum of ``Y_{i-1} X_{i1} + Y_i^2/2`` over updates, with ``Y_0 = y0``."""
    y = np.asarray(y, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    previous = np.concatenate(([float(y0)], y[:-1]))
    return math.fsum(previous * x1 + y * y / 2.0)


def multi_sample_path(y: np.ndarray, x1: np.ndarray, y0: float):
    """Sample path seen by monitor 1 when updates end at the slowest monitor."""
    y = np.asarray(y, dtype=float)
    completions = np.cumsum(y)
    starts = np.concatenate(([0.0], completions[:-1]))
    return starts + np.asarray(x1, dtype=float), starts, float(completions[-1]), float(y0)


def fr_slot_areas(x: np.ndarray, n: int, initial_age: float) -> np.ndarray:
    """
    Area contributed by each FR packet slot.

    A slot that starts at age ``a`` contributes ``a*X + n^2/2`` if its packet
    is decoded at position ``X <= n`` (the age then ends the slot at ``n``)
    and ``a*n + n^2/2`` if it is discarded (the age ends at ``a + n``).

    :param x: Decoding position per slot, ``> n`` for a discarded packet.
    :param n: Packet length.
    :param initial_age: Age at the start of the first slot.
    """
    x = np.asarray(x)
    delivered = x <= n
    slots = np.arange(len(x))
    last = np.maximum.accumulate(np.where(delivered, slots, -1))
    previous_last = np.concatenate(([-1], last[:-1]))
    start_age = np.where(
        previous_last >= 0,
        float(n) * (slots - previous_last),
        float(initial_age) + float(n) * slots,
    )
    return np.where(delivered, start_age * x, start_age * float(n)) + n * n / 2.0


def fr_sample_path(x: np.ndarray, n: int, initial_age: float):
    """Delivery and generation instants, end time and initial age of an FR path."""
    x = np.asarray(x)
    delivered = np.flatnonzero(x <= n)
    starts = delivered.astype(float) * n
    return starts + x[delivered], starts, float(len(x) * n), float(initial_age)
