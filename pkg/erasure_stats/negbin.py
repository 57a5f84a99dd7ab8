"""
Negative binomial delivery time of one update.

An update of ``k`` symbols sent over a symbol-erasure channel is decoded at
the slot ``X_k`` where the ``k``-th un-erased symbol arrives, so ``X_k`` is
negative binomial with

    P[X_k = x] = C(x-1, k-1) (1-delta)^k delta^(x-k),   x = k, k+1, ...

The PMF is built from the ratio recurrence

    P[X_k = x+1] = P[X_k = x] * delta * x / (x-k+1)

with the seed ``(1-delta)^k`` kept in log space, so nothing overflows or
underflows to NaN even for ``k`` in the millions; entries that are below
the smallest double simply become ``0``.

The CDF is the compensated running sum of the PMF up to one half and
``1 - I_delta(n-k+1, k)`` beyond, so the discard probability keeps shrinking
deep into the tail instead of stalling a few ulps above zero.

Tables are cached per ``(k, delta)`` in power-of-two lengths and returned as
read-only slices. Every entry depends only on the entries before it, so the
prefix of a longer table is bit-for-bit equal to a shorter one, which keeps
single-point calls and sweeps consistent.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import special

from common.utils.exceptions import InvalidParameterError
from common.utils.validators import require_int
from erasure_stats.schemas import ChannelSpec, NbSummary

logger = logging.getLogger(__name__)

_MIN_TABLE = 64


def _compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """
    Running sums with Neumaier compensation.

    Plain ``np.cumsum`` loses up to ``len(values) * eps`` relative accuracy;
    the compensated sum keeps the error at a few ulps for any length.
    """
    out = np.empty(len(values), dtype=float)
    total = 0.0
    comp = 0.0
    for i, value in enumerate(values.tolist()):
        t = total + value
        if abs(total) >= abs(value):
            comp += (total - t) + value
        else:
            comp += (value - t) + total
        total = t
        out[i] = total + comp
    return out


def _table_end(k: int, n_max: int) -> int:
    """Last support point of the cached table that covers ``k..n_max``."""
    size = n_max - k + 1
    return k - 1 + max(_MIN_TABLE, 1 << (size - 1).bit_length())


@lru_cache(maxsize=256)
def _log_gamma_table(k: int, delta: float, n_end: int) -> np.ndarray:
    # log of C(x-1, k-1) delta^(x-k) for x = k..n_end; requires delta > 0
    size = n_end - k + 1
    table = np.zeros(size, dtype=float)
    if size > 1:
        x = np.arange(k, n_end, dtype=float)
        steps = math.log(delta) + np.log(x) - np.log(x - k + 1.0)
        table[1:] = np.cumsum(steps)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=256)
def _pmf_table(k: int, delta: float, n_end: int) -> np.ndarray:
    size = n_end - k + 1
    if delta == 0.0:
        table = np.zeros(size, dtype=float)
        table[0] = 1.0
    else:
        seed = k * math.log1p(-delta)
        table = np.exp(seed + _log_gamma_table(k, delta, n_end))
    table.setflags(write=False)
    return table


@lru_cache(maxsize=256)
def _cdf_table(k: int, delta: float, n_end: int) -> np.ndarray:
    table = _compensated_cumsum(_pmf_table(k, delta, n_end))
    # Above one half the running sum stalls a few ulps short of 1; there the
    # complement of the incomplete-beta tail is exact to half an ulp.
    upper = table > 0.5
    if delta == 0.0:
        table[upper] = 1.0
    elif upper.any():
        failures = np.arange(1, n_end - k + 2, dtype=float)[upper]
        table[upper] = 1.0 - special.betainc(failures, float(k), delta)
    table = np.minimum(np.maximum.accumulate(table), 1.0)
    table.setflags(write=False)
    return table


def nb_pmf_table(spec: ChannelSpec, n_max: int) -> np.ndarray:
    """
    PMF of ``X_k`` on ``x = k..n_max``.

    :param spec: Channel.
    :param n_max: Last support point. Below ``k`` the result is empty.
    :returns: Read-only array; entry ``i`` is ``P[X_k = k + i]``.
    """
    n_max = require_int("n_max", n_max)
    if n_max < spec.k:
        return np.empty(0, dtype=float)
    return _pmf_table(spec.k, spec.delta, _table_end(spec.k, n_max))[: n_max - spec.k + 1]


def nb_pmf(spec: ChannelSpec, x: int) -> float:
    """
    Probability that update delivery takes exactly ``x`` slots.

    :param spec: Channel.
    :param x: Number of transmitted symbols; ``0`` is returned for ``x < k``.
    :returns: ``P[X_k = x]``.
    """
    x = require_int("x", x)
    if x < spec.k:
        return 0.0
    return float(nb_pmf_table(spec, x)[-1])


def nb_cdf_table(spec: ChannelSpec, n_max: int) -> np.ndarray:
    """
    CDF of ``X_k`` on ``n = k..n_max``.

    :returns: Read-only array; entry ``i`` is ``F_k(k + i)``.
    """
    n_max = require_int("n_max", n_max)
    if n_max < spec.k:
        return np.empty(0, dtype=float)
    return _cdf_table(spec.k, spec.delta, _table_end(spec.k, n_max))[: n_max - spec.k + 1]


def nb_cdf(spec: ChannelSpec, n: int) -> float:
    """
    ``F_k(n) = P[X_k <= n]``, the probability that an ``n``-symbol packet
    is decoded.

    ``1 - nb_cdf(spec, n)`` is the discard probability ``epsilon_n`` of a
    fixed-redundancy packet.

    :param spec: Channel.
    :param n: Packet length; any integer, ``0`` is returned for ``n < k``.
    """
    n = require_int("n", n)
    if n < spec.k:
        return 0.0
    return float(nb_cdf_table(spec, n)[-1])


def nb_sf(spec: ChannelSpec, n):
    """
    Survival function ``P[X_k > n]``.

    Evaluated through the regularised incomplete beta function
    ``I_delta(n-k+1, k)``, which stays accurate deep in the tail where
    ``1 - F_k(n)`` would cancel to zero.

    :param spec: Channel.
    :param n: Integer or integer array.
    :returns: ``float`` for scalar input, ``numpy.ndarray`` otherwise.
    """
    scalar = np.ndim(n) == 0
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        raise InvalidParameterError("n must be an integer")
    k = spec.k
    failures = np.maximum(n - k + 1, 1).astype(float)
    if spec.delta == 0.0:
        tail = np.zeros(n.shape, dtype=float)
    else:
        tail = special.betainc(failures, float(k), spec.delta)
    tail = np.where(n < k, 1.0, tail)
    return float(tail) if scalar else tail


def nb_moments(spec: ChannelSpec) -> NbSummary:
    """
    Exact mean and variance of ``X_k``.

    :returns: ``NbSummary(k/(1-delta), k*delta/(1-delta)**2)``.
    """
    one_minus = 1.0 - spec.delta
    return NbSummary(
        mu_k=spec.k / one_minus,
        sigma2_k=spec.k * spec.delta / (one_minus * one_minus),
    )


@lru_cache(maxsize=256)
def _conditional_mean_table(k: int, delta: float, n_end: int) -> np.ndarray:
    size = n_end - k + 1
    if delta == 0.0:
        table = np.full(size, float(k))
        table.setflags(write=False)
        return table

    x = np.arange(k, n_end + 1, dtype=float)
    log_gamma = _log_gamma_table(k, delta, n_end)
    # q_n = q_{n-1} + gamma_n and qhat_n = qhat_{n-1} + (n/k) gamma_n, in log space
    log_q = np.logaddexp.accumulate(log_gamma)
    log_qhat = np.logaddexp.accumulate(log_gamma + np.log(x / k))
    table = k * np.exp(log_qhat - log_q)
    table[0] = float(k)

    # Rounding can leave one-ulp dips once the sums stop changing; the
    # sequence is nondecreasing and capped by min(n, k/(1-delta)).
    table = np.maximum.accumulate(table)
    table = np.minimum(table, np.minimum(x, k / (1.0 - delta)))
    table.setflags(write=False)
    return table


def conditional_mean_table(spec: ChannelSpec, n_max: int) -> np.ndarray:
    """
    ``mu_tilde_n = E[X_k | X_k <= n]`` for ``n = k..n_max``.

    :raises InvalidParameterError: If ``n_max < k``.
    """
    n_max = require_int("n_max", n_max)
    if n_max < spec.k:
        raise InvalidParameterError(f"n must satisfy n >= k = {spec.k}, got {n_max}")
    return _conditional_mean_table(spec.k, spec.delta, _table_end(spec.k, n_max))[: n_max - spec.k + 1]


def conditional_mean(spec: ChannelSpec, n: int) -> float:
    """
    Expected delivery slot of an update that is delivered within ``n``
    symbols, ``mu_tilde_n = E[X_k | X_k <= n]``.

    With ``gamma_x = C(x-1, k-1) delta^(x-k)``, the partial sums
    ``q_n = sum gamma_x`` and ``qhat_n = sum (x/k) gamma_x`` give
    ``mu_tilde_n = k qhat_n / q_n``. Both sums are accumulated in log space.
    The result is nondecreasing in ``n``, equals ``k`` at ``n = k`` and
    never exceeds ``min(n, k/(1-delta))``.

    :param spec: Channel.
    :param n: Packet length, ``n >= k``.
    :raises InvalidParameterError: If ``n < k``.
    """
    n = require_int("n", n)
    return float(conditional_mean_table(spec, n)[-1])
