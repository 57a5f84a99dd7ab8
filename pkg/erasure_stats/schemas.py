"""
Schemas for the erasure statistics package.

This module defines the dataclasses passed between the negative binomial
routines: the channel description itself and the summaries computed from
it. Instances are immutable, so they can be shared freely between threads.
"""

from dataclasses import dataclass

from common.utils.validators import require_erasure_probability, require_int


@dataclass(frozen=True)
class ChannelSpec:
    """
    A status-update channel.

    Each update carries ``k`` information symbols; every transmitted symbol
    is erased independently with probability ``delta``.

    Attributes
    ----------
    k : int
        Information symbols per update, ``k >= 1``.
    delta : float
        Symbol erasure probability, ``0 <= delta < 1``. ``delta = 1`` is
        rejected because no update would ever be delivered.
    """
    k: int
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "k", require_int("k", self.k, minimum=1))
        object.__setattr__(self, "delta", require_erasure_probability("delta", self.delta))

    @property
    def mu(self) -> float:
        """Mean delivery time ``k/(1-delta)``, also the normalisation unit of the figures."""
        return self.k / (1.0 - self.delta)


@dataclass(frozen=True)
class NbSummary:
    """
    Mean and variance of the delivery time ``X_k``.

    Attributes
    ----------
    mu_k : float
        ``E[X_k] = k/(1-delta)`` in slots.
    sigma2_k : float
        ``Var[X_k] = k*delta/(1-delta)**2`` in slots squared; zero only on an
        erasure-free channel.
    """
    mu_k: float
    sigma2_k: float

    @property
    def sigma_k(self) -> float:
        return self.sigma2_k ** 0.5


@dataclass(frozen=True)
class MaxMoments:
    """
    First two moments of ``Y = max(X_1, ..., X_m)`` for iid copies of ``X_k``.

    Both moments are truncated tail sums. ``tail_bound`` and ``tail_bound_sq``
    are certified upper bounds on what was left out of ``ey`` and ``ey2``.

    Attributes
    ----------
    m : int
        Number of monitors.
    ey : float
        ``E[Y]`` in slots.
    ey2 : float
        ``E[Y**2]`` in slots squared.
    truncation_point : int
        Largest ``y`` included in the sums.
    tail_bound : float
        Upper bound on the omitted part of ``E[Y]``.
    tail_bound_sq : float
        Upper bound on the omitted part of ``E[Y**2]``.
    """
    m: int
    ey: float
    ey2: float
    truncation_point: int
    tail_bound: float
    tail_bound_sq: float = 0.0


@dataclass(frozen=True)
class ChernoffTilt:
    """
    Optimised Chernoff bound on ``P[X_k >= n]``.

    Attributes
    ----------
    n : int
        Tail threshold.
    s_star : float
        Minimising tilt parameter (``0`` when ``n <= mu_k``).
    log_bound : float
        Natural log of the bound, never above ``0``.
    """
    n: int
    s_star: float
    log_bound: float
