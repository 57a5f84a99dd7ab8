"""
Schemas for the analytic age package.

These dataclasses carry the results of the closed-form age computations.
All ages are time averages measured in slots (one symbol per slot).
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class IirAge:
    """
    Average age under infinite incremental redundancy with one monitor.

    Attributes
    ----------
    age : float
        Time-average age in slots, at least ``1.5 k/(1-delta)``.
    zero_wait_optimal : bool
        ``True`` iff ``delta <= k/(2k+1)``, i.e. sending a fresh update
        right after each delivery cannot be improved by waiting.
    """
    age: float
    zero_wait_optimal: bool


@dataclass(frozen=True)
class FrCurvePoint:
    """
    One packet length of a fixed-redundancy sweep.

    Attributes
    ----------
    n : int
        Packet length in symbols, ``n >= k``.
    age : float
        Exact average age ``n/(1-eps) - n/2 + mu_tilde``.
    upper_bound : float
        Same expression with ``mu_tilde`` replaced by ``k/(1-delta)``.
    epsilon_n : float
        Probability the packet is discarded (fewer than ``k`` symbols survive).
    mu_tilde_n : float
        Mean decoding slot of a packet that is delivered.
    """
    n: int
    age: float
    upper_bound: float
    epsilon_n: float
    mu_tilde_n: float


@dataclass(frozen=True)
class OptResult:
    """
    Optimal fixed redundancy, exact and CLT-approximate.

    CLT fields are ``None`` when the approximation is unavailable
    (``2k/(pi*delta) <= 1``); ``fr_opt_bound`` is also ``None`` when
    ``beta_k >= 1``. ``note`` then says why.

    Attributes
    ----------
    n_star_exact : int
        Smallest packet length minimising the exact age over the scanned range.
    age_star_exact : float
        Age at ``n_star_exact``.
    n_hat_clt : int | None
        ``round(mu_k + sigma_k * z_star)`` (half rounds up).
    age_at_n_hat : float | None
        Exact age at ``n_hat_clt``.
    bound_at_n_hat : float | None
        Upper bound at ``n_hat_clt``.
    w_k : float | None
        Relative CLT redundancy ``sqrt((delta/k) ln(2k/(pi delta)))``.
    z_star : float | None
        ``sqrt(ln(2k/(pi delta)))``.
    fr_opt_bound : float | None
        Closed-form bound on the optimised age built from ``beta_k`` and ``w_k``.
    beta_k : float | None
        Tail level used by ``fr_opt_bound``.
    eta0 : float
        Exponent slack used for ``beta_k``.
    clt_available : bool
        Whether the CLT threshold could be evaluated.
    scan_horizon : int
        Largest packet length evaluated by the exact search.
    note : str | None
        Why a field is missing, or a remark on a degenerate channel.
    """
    n_star_exact: int
    age_star_exact: float
    n_hat_clt: int | None
    age_at_n_hat: float | None
    bound_at_n_hat: float | None
    w_k: float | None
    z_star: float | None
    fr_opt_bound: float | None
    beta_k: float | None
    eta0: float
    clt_available: bool
    scan_horizon: int
    note: str | None = None


@dataclass(frozen=True)
class Crossover:
    """
    First monitor count at which multi-monitor IIR loses to CLT-tuned FR.

    Attributes
    ----------
    m : int | None
        Smallest ``m`` with IIR age above the FR bound at ``n_hat``, or
        ``None`` if there is none up to ``m_limit``.
    m_limit : int
        Largest ``m`` searched.
    fr_bound_norm : float
        FR upper bound at ``n_hat`` divided by ``k/(1-delta)``.
    iir_age_norm : float | None
        Normalised IIR age at ``m``.
    """
    m: int | None
    m_limit: int
    fr_bound_norm: float
    iir_age_norm: float | None
