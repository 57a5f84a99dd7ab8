"""
Tail bounds on the delivery time ``X_k``.

``X_k`` has moment generating function

    phi(s) = [(1-delta) e^s / (1 - delta e^s)]^k,   delta e^s < 1,

so ``P[X_k >= n] <= min_s e^(-s n) phi(s)``. Solving the first-order
condition gives the exponential tilt ``s* = ln((n-k) / (n delta))``, which is
non-negative exactly when ``n >= k/(1-delta)``.
"""

import math

from common.utils.exceptions import InvalidParameterError
from common.utils.validators import require_int, require_positive
from erasure_stats.schemas import ChannelSpec, ChernoffTilt


def chernoff_tilt(spec: ChannelSpec, n: int) -> ChernoffTilt:
    """
    Minimising tilt and minimised log bound for ``P[X_k >= n]``.

    For ``n <= mu_k`` the best the bound can say is ``1`` (``s* = 0``).
    On an erasure-free channel the tail above ``k`` is empty, reported as
    ``log_bound = -inf``.

    :param spec: Channel.
    :param n: Tail threshold.
    """
    n = require_int("n", n)
    k, delta = spec.k, spec.delta
    if n <= spec.mu:
        return ChernoffTilt(n=n, s_star=0.0, log_bound=0.0)
    if delta == 0.0:
        return ChernoffTilt(n=n, s_star=math.inf, log_bound=-math.inf)

    s_star = math.log((n - k) / (n * delta))
    # -s n + ln phi(s) at s*, using 1 - delta e^s* = k/n
    log_bound = -(n - k) * s_star + k * math.log((1.0 - delta) * n / k)
    return ChernoffTilt(n=n, s_star=s_star, log_bound=min(0.0, log_bound))


def log_mgf(spec: ChannelSpec, s: float) -> float:
    """
    ``ln phi(s)`` for the delivery time.

    :raises InvalidParameterError: If ``delta e^s >= 1`` (the MGF diverges).
    """
    if spec.delta == 0.0:
        return spec.k * s
    scaled = spec.delta * math.exp(s)
    if scaled >= 1.0:
        raise InvalidParameterError("s must satisfy delta * exp(s) < 1")
    return spec.k * (math.log1p(-spec.delta) + s - math.log1p(-scaled))


def chernoff_tail(spec: ChannelSpec, n: int) -> float:
    """
    Upper bound on ``P[X_k >= n]``.

    :param spec: Channel.
    :param n: Tail threshold; ``1.0`` is returned for ``n <= k/(1-delta)``.
    :returns: A value in ``[0, 1]`` that is never below the exact tail.
    """
    return math.exp(chernoff_tilt(spec, n).log_bound)


def beta_k(spec: ChannelSpec, eta0: float) -> float:
    """
    ``beta_k = exp(eta0/(1-delta)) * sqrt(pi delta / (2k))``.

    For large enough ``k`` this dominates the probability that an update is
    not decoded within the CLT packet length. How large is not quantified,
    so the value is reported next to the exact tail rather than asserted
    against it.

    :param spec: Channel with ``delta > 0``.
    :param eta0: Slack in the tail exponent, ``eta0 > 0``.
    """
    eta0 = require_positive("eta0", eta0)
    if spec.delta == 0.0:
        raise InvalidParameterError("delta must satisfy delta > 0 for beta_k")
    return math.exp(eta0 / (1.0 - spec.delta)) * math.sqrt(math.pi * spec.delta / (2.0 * spec.k))
