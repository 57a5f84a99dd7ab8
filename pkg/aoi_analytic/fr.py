"""
Average age under fixed redundancy (FR).

Each update is sent as an ``n``-symbol packet without feedback; it is decoded
at slot ``X_k`` of its packet if ``X_k <= n`` and discarded otherwise. The
end of a packet that was decoded is a renewal point, and renewal-reward
gives

    age(n) = n/(1-eps_n) - n/2 + mu_tilde_n,

where ``eps_n = 1 - F_k(n)`` and ``mu_tilde_n = E[X_k | X_k <= n]``. Since
``mu_tilde_n <= k/(1-delta)``, replacing it by ``k/(1-delta)`` gives an
upper bound that only depends on the decoding probability. A central limit
approximation of that bound yields the packet length

    n_hat = mu_k + sigma_k sqrt(ln(2k/(pi delta))) = (k/(1-delta)) (1 + w_k).
"""

import logging
import math

import numpy as np

from common import config
from common.utils.exceptions import CltUnavailableError, InvalidParameterError, TruncationError, VacuousBoundError
from common.utils.validators import require_int, require_positive
from erasure_stats import ChannelSpec, beta_k, conditional_mean_table, nb_cdf_table, nb_moments, nb_sf
from aoi_analytic.schemas import FrCurvePoint, OptResult

logger = logging.getLogger(__name__)


def _fr_arrays(spec: ChannelSpec, ns: np.ndarray):
    """Decoding probability, ``mu_tilde``, age and bound for each packet length in ``ns``."""
    k = spec.k
    n_max = int(ns.max())
    offsets = ns - k
    delivered = nb_cdf_table(spec, n_max)[offsets]
    mu_tilde = conditional_mean_table(spec, n_max)[offsets]
    n_float = ns.astype(float)
    with np.errstate(divide="ignore", over="ignore"):
        # decoding probabilities that underflow to 0 (or nearly) give an infinite age
        base = n_float / delivered - n_float / 2.0
    return delivered, mu_tilde, base + mu_tilde, base + spec.mu


def fr_curve(spec: ChannelSpec, n_values) -> list[FrCurvePoint]:
    """
    FR age, bound, discard probability and conditional mean for each ``n``.

    :param spec: Channel.
    :param n_values: Packet lengths, each ``>= k``.
    :raises InvalidParameterError: If a packet length is below ``k``.
    """
    ns = [require_int("n", n) for n in n_values]
    if not ns:
        return []
    bad = [n for n in ns if n < spec.k]
    if bad:
        raise InvalidParameterError(f"n must satisfy n >= k = {spec.k}, got {bad[0]}")
    ns = np.asarray(ns, dtype=np.int64)
    _, mu_tilde, age, upper = _fr_arrays(spec, ns)
    # the incomplete-beta tail keeps its relative accuracy where 1 - F_k(n) has none
    discard = np.atleast_1d(nb_sf(spec, ns))
    return [
        FrCurvePoint(
            n=int(ns[i]),
            age=float(age[i]),
            upper_bound=float(upper[i]),
            epsilon_n=float(discard[i]),
            mu_tilde_n=float(mu_tilde[i]),
        )
        for i in range(len(ns))
    ]


def fr_age(spec: ChannelSpec, n: int) -> FrCurvePoint:
    """
    FR age with packet length ``n``.

    :param spec: Channel.
    :param n: Packet length, ``n >= k``.
    :returns: The full curve point (age, bound, ``epsilon_n``, ``mu_tilde_n``).
    """
    return fr_curve(spec, [n])[0]


def _clt_log_argument(spec: ChannelSpec) -> float:
    if spec.delta == 0.0:
        raise CltUnavailableError("the CLT threshold needs delta > 0")
    arg = 2.0 * spec.k / (math.pi * spec.delta)
    if arg <= 1.0:
        raise CltUnavailableError(
            f"CLT approximation unavailable: 2k/(pi*delta) = {arg:.6g} <= 1"
        )
    return math.log(arg)


def z_star(spec: ChannelSpec) -> float:
    """Standardised CLT threshold ``sqrt(ln(2k/(pi delta)))``."""
    return math.sqrt(_clt_log_argument(spec))


def w_k(spec: ChannelSpec) -> float:
    """Relative redundancy ``sqrt((delta/k) ln(2k/(pi delta)))`` of the CLT packet length."""
    return math.sqrt(spec.delta / spec.k * _clt_log_argument(spec))


def n_hat_real(spec: ChannelSpec) -> float:
    """Real-valued CLT packet length ``mu_k + sigma_k z_star``."""
    summary = nb_moments(spec)
    return summary.mu_k + summary.sigma_k * z_star(spec)


def n_hat_clt(spec: ChannelSpec) -> int:
    """CLT packet length rounded to the nearest integer, halves rounding up."""
    return math.floor(n_hat_real(spec) + 0.5)


def fr_opt_age_bound(spec: ChannelSpec, eta0: float = config.DEFAULT_ETA0) -> float:
    """
    Closed-form bound on the optimised FR age,

        (k/(1-delta)) [3/2 + (beta_k + w_k (1+beta_k)/2) / (1-beta_k)].

    It holds once ``k`` is large enough for the tail at ``n_hat`` to sit
    below ``beta_k``.

    :raises VacuousBoundError: If ``beta_k >= 1``.
    :raises CltUnavailableError: If ``w_k`` is undefined.
    """
    eta0 = require_positive("eta0", eta0)
    beta = beta_k(spec, eta0)
    if beta >= 1.0:
        raise VacuousBoundError(f"bound is vacuous: beta_k = {beta:.6g} >= 1")
    w = w_k(spec)
    return spec.mu * (1.5 + (beta + 0.5 * w * (1.0 + beta)) / (1.0 - beta))


def fr_optimize(spec: ChannelSpec, eta0: float = config.DEFAULT_ETA0) -> OptResult:
    """
    Exact and CLT-approximate optimal packet length.

    The exact search evaluates the age from ``n = k`` upward in growing
    blocks and stops once the smallest value found is followed by
    ``3*ceil(sigma_k) + 10`` larger ones. For large ``n`` the age grows
    with slope ``1/2``, so the minimum over the scanned range is the
    answer; ties go to the smallest ``n``.

    :param spec: Channel.
    :param eta0: Exponent slack for ``beta_k`` and the closed-form bound.
    :raises TruncationError: If the scan does not settle within
        ``AOI_MAX_TRUNCATION_ROUNDS`` extensions.
    """
    eta0 = require_positive("eta0", eta0)
    k = spec.k

    if spec.delta == 0.0:
        age = 1.5 * k
        return OptResult(
            n_star_exact=k, age_star_exact=age, n_hat_clt=k, age_at_n_hat=age,
            bound_at_n_hat=age, w_k=0.0, z_star=None, fr_opt_bound=age, beta_k=0.0,
            eta0=eta0, clt_available=True, scan_horizon=k,
            note="erasure-free channel: n = k is optimal",
        )

    summary = nb_moments(spec)
    window = 3 * math.ceil(summary.sigma_k) + 10
    notes = []

    try:
        n_hat = n_hat_clt(spec)
        z = z_star(spec)
        w = w_k(spec)
        clt_available = True
    except CltUnavailableError as exc:
        logger.warning("%s (k=%d, delta=%g)", exc, k, spec.delta)
        n_hat = z = w = None
        clt_available = False
        notes.append(str(exc))

    horizon = max(math.ceil(summary.mu_k + 6.0 * summary.sigma_k), n_hat or k) + window
    for _ in range(config.MAX_TRUNCATION_ROUNDS):
        ns = np.arange(k, horizon + 1, dtype=np.int64)
        _, _, ages, uppers = _fr_arrays(spec, ns)
        best = int(np.argmin(ages))
        n_star = k + best
        if horizon - n_star >= window:
            break
        logger.debug("fr scan: minimum at n=%d too close to horizon %d, extending", n_star, horizon)
        horizon = n_star + 2 * window
    else:
        raise TruncationError(f"FR optimum scan did not settle (k={k}, delta={spec.delta})")

    age_at_n_hat = bound_at_n_hat = fr_bound = beta = None
    if clt_available:
        age_at_n_hat = float(ages[n_hat - k])
        bound_at_n_hat = float(uppers[n_hat - k])
        beta = beta_k(spec, eta0)
        try:
            fr_bound = fr_opt_age_bound(spec, eta0)
        except VacuousBoundError as exc:
            logger.warning("%s (k=%d, delta=%g)", exc, k, spec.delta)
            notes.append(str(exc))

    result = OptResult(
        n_star_exact=n_star,
        age_star_exact=float(ages[best]),
        n_hat_clt=n_hat,
        age_at_n_hat=age_at_n_hat,
        bound_at_n_hat=bound_at_n_hat,
        w_k=w,
        z_star=z,
        fr_opt_bound=fr_bound,
        beta_k=beta,
        eta0=eta0,
        clt_available=clt_available,
        scan_horizon=horizon,
        note="; ".join(notes) or None,
    )
    logger.info("fr optimum k=%d delta=%g: n*=%d n_hat=%s", k, spec.delta, n_star, n_hat)
    return result
