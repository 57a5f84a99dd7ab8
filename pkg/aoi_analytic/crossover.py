"""
Monitor count at which fixed redundancy overtakes IIR.

The IIR age grows with the number of monitors because an update only ends
when the slowest monitor decodes it. The FR age does not depend on the
number of monitors at all, so for every erasure rate there is a monitor
count beyond which FR tuned to ``n_hat`` is better.
"""

import logging

from common import config
from common.utils.exceptions import InvalidParameterError
from common.utils.validators import require_int
from erasure_stats import ChannelSpec
from aoi_analytic.fr import fr_age, n_hat_clt
from aoi_analytic.iir import iir_age_multi
from aoi_analytic.schemas import Crossover

logger = logging.getLogger(__name__)

DEFAULT_M_LIMIT = 16384


def find_crossover(spec: ChannelSpec, m_limit: int = DEFAULT_M_LIMIT,
                   tol: float = config.DEFAULT_TOL) -> Crossover:
    """
    Smallest ``m`` whose IIR age exceeds the FR upper bound at ``n_hat``.

    The IIR age is increasing in ``m``, so the search doubles ``m`` until
    the FR bound is passed and then bisects.

    :param spec: Channel of every monitor, ``delta > 0``.
    :param m_limit: Largest monitor count to try.
    :param tol: Tolerance of the IIR moment sums.
    :raises CltUnavailableError: If ``n_hat`` is undefined for this channel.
    """
    m_limit = require_int("m_limit", m_limit, minimum=1)
    if spec.delta == 0.0:
        raise InvalidParameterError("delta must satisfy delta > 0 for a crossover search")
    unit = spec.mu
    fr_bound = fr_age(spec, n_hat_clt(spec)).upper_bound

    def exceeds(m: int) -> float | None:
        age = iir_age_multi(spec, m, tol)
        return age if age > fr_bound else None

    low, high, high_age = 0, 1, exceeds(1)
    while high_age is None:
        if high >= m_limit:
            logger.info("no crossover up to m=%d (k=%d, delta=%g)", m_limit, spec.k, spec.delta)
            return Crossover(m=None, m_limit=m_limit, fr_bound_norm=fr_bound / unit, iir_age_norm=None)
        low, high = high, min(2 * high, m_limit)
        high_age = exceeds(high)

    # invariant: low does not exceed the bound (or is 0), high does
    while high - low > 1:
        mid = (low + high) // 2
        mid_age = exceeds(mid)
        if mid_age is None:
            low = mid
        else:
            high, high_age = mid, mid_age

    return Crossover(m=high, m_limit=m_limit, fr_bound_norm=fr_bound / unit, iir_age_norm=high_age / unit)
