"""
Order statistics of the delivery time: ``Y = max(X_1, ..., X_m)``.

With ``m`` monitors behind independent channels, an update is finished when
the slowest monitor decodes it, and ``P[Y <= y] = F_k(y)^m``. The moments

    E[Y]   = sum_{y>=0} (1 - F_k(y)^m)
    E[Y^2] = sum_{y>=0} (2y+1) (1 - F_k(y)^m)

have no closed form, so the sums are truncated once a certified bound on
the rest falls below the requested relative tolerance.
"""

import logging
import math

import numpy as np

from common import config
from common.utils.exceptions import TruncationError
from common.utils.validators import require_int, require_positive
from erasure_stats.bounds import chernoff_tilt, log_mgf
from erasure_stats.negbin import nb_cdf, nb_moments, nb_sf
from erasure_stats.schemas import ChannelSpec, MaxMoments

logger = logging.getLogger(__name__)


def max_nb_cdf(spec: ChannelSpec, m: int, y: int) -> float:
    """``P[Y <= y] = F_k(y)^m`` for the maximum of ``m`` delivery times."""
    m = require_int("m", m, minimum=1)
    return nb_cdf(spec, y) ** m


def _remainder_bounds(spec: ChannelSpec, m: int, y_end: int) -> tuple[float, float]:
    """
    Bounds on the omitted terms ``y > y_end`` of both moment sums.

    ``1 - F^m <= m P[X >= y+1] <= m phi(s) e^(-s(y+1))`` with ``s`` fixed at
    the tilt that is optimal for ``y_end + 2``; the two sums are then
    geometric (plain and arithmetic-geometric) and have closed forms.
    """
    s = chernoff_tilt(spec, y_end + 2).s_star
    if s <= 0.0:
        return math.inf, math.inf
    a = y_end + 1
    r = math.exp(-s)
    one_minus_r = -math.expm1(-s)
    log_lead = math.log(m) + log_mgf(spec, s) - s * (a + 1)
    lead = math.exp(log_lead)
    tail = lead / one_minus_r
    tail_sq = lead * ((2 * a + 1) / one_minus_r + 2.0 * r / (one_minus_r * one_minus_r))
    return tail, tail_sq


def max_nb_moments(spec: ChannelSpec, m: int, tol: float = config.DEFAULT_TOL) -> MaxMoments:
    """
    ``E[Y]`` and ``E[Y^2]`` for the maximum of ``m`` iid delivery times.

    The summation range starts a dozen standard deviations past the mean
    and doubles until the certified remainder of each sum is at most
    ``tol`` times its partial sum.

    :param spec: Channel.
    :param m: Number of monitors, ``m >= 1``.
    :param tol: Relative tolerance, ``tol > 0``.
    :raises TruncationError: If the remainder bound is still too large after
        ``AOI_MAX_TRUNCATION_ROUNDS`` doublings.
    """
    m = require_int("m", m, minimum=1)
    tol = require_positive("tol", tol)
    k = spec.k
    if spec.delta == 0.0:
        return MaxMoments(m=m, ey=float(k), ey2=float(k * k), truncation_point=k,
                          tail_bound=0.0, tail_bound_sq=0.0)

    summary = nb_moments(spec)
    spread = 12.0 + math.sqrt(2.0 * math.log(m))
    y_end = math.ceil(summary.mu_k + spread * summary.sigma_k) + 16

    for round_no in range(config.MAX_TRUNCATION_ROUNDS):
        ys = np.arange(k, y_end + 1)
        survival = nb_sf(spec, ys)
        # 1 - (1 - S)^m without cancelling when S is tiny; S = 1 gives log1p(-1) = -inf
        with np.errstate(divide="ignore"):
            terms = -np.expm1(m * np.log1p(-survival))
        ey = k + math.fsum(terms)
        ey2 = k * k + math.fsum((2.0 * ys + 1.0) * terms)
        tail, tail_sq = _remainder_bounds(spec, m, y_end)
        logger.debug("max moments m=%d round=%d y_end=%d tail=%.3g tail_sq=%.3g",
                     m, round_no, y_end, tail, tail_sq)
        if tail <= tol * ey and tail_sq <= tol * ey2:
            return MaxMoments(m=m, ey=ey, ey2=ey2, truncation_point=y_end,
                              tail_bound=tail, tail_bound_sq=tail_sq)
        y_end = k + 2 * (y_end - k)

    raise TruncationError(
        f"max-of-{m} moment sums did not reach tol={tol} within "
        f"{config.MAX_TRUNCATION_ROUNDS} rounds (k={k}, delta={spec.delta})"
    )
