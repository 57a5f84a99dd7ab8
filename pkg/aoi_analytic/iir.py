"""
Average age under infinite incremental redundancy (IIR).

Under IIR the source keeps sending coded symbols of the current update until
every monitor has decoded it, then starts the next one at once. With one
monitor the inter-delivery times are iid copies of ``X_k`` and the sawtooth
area per update is ``X_{i-1} X_i + X_i^2/2``, so

    age = E[X] + E[X^2] / (2 E[X]) = (k/(1-delta)) (3/2 + delta/(2k)).

With ``m`` monitors the update time is ``Y = max_j X_j`` and the age seen by
any one monitor is ``E[X] + E[Y^2] / (2 E[Y])``.
"""

import logging

from common import config
from common.utils.validators import require_int
from erasure_stats import ChannelSpec, max_nb_moments, nb_moments
from aoi_analytic.schemas import IirAge

logger = logging.getLogger(__name__)


def zero_wait_threshold(spec: ChannelSpec) -> float:
    """Largest erasure probability for which the zero-wait policy is optimal, ``k/(2k+1)``."""
    return spec.k / (2.0 * spec.k + 1.0)


def iir_age(spec: ChannelSpec) -> IirAge:
    """
    Single-monitor IIR age.

    :param spec: Channel.
    :returns: The age and whether zero-wait updating is optimal.
    """
    age = spec.mu * (1.5 + spec.delta / (2.0 * spec.k))
    return IirAge(age=age, zero_wait_optimal=spec.delta <= zero_wait_threshold(spec))


def iir_age_multi(spec: ChannelSpec, m: int, tol: float = config.DEFAULT_TOL) -> float:
    """
    IIR age at one of ``m`` monitors with independent, identical channels.

    :param spec: Channel of every monitor.
    :param m: Number of monitors, ``m >= 1``.
    :param tol: Relative tolerance of the truncated max-of-``m`` moments.
    :raises TruncationError: Propagated from the moment sums.
    """
    m = require_int("m", m, minimum=1)
    moments = max_nb_moments(spec, m, tol)
    return nb_moments(spec).mu_k + moments.ey2 / (2.0 * moments.ey)


def iir_age_multi_curve(spec: ChannelSpec, m_values, tol: float = config.DEFAULT_TOL) -> list[float]:
    """``iir_age_multi`` for each monitor count in ``m_values``, in order."""
    return [iir_age_multi(spec, m, tol) for m in m_values]
