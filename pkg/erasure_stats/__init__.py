"""Negative binomial delivery-time statistics for a symbol-erasure channel."""

from erasure_stats.bounds import beta_k, chernoff_tail, chernoff_tilt, log_mgf
from erasure_stats.negbin import (
    conditional_mean,
    conditional_mean_table,
    nb_cdf,
    nb_cdf_table,
    nb_moments,
    nb_pmf,
    nb_pmf_table,
    nb_sf,
)
from erasure_stats.order_stats import max_nb_cdf, max_nb_moments
from erasure_stats.schemas import ChannelSpec, ChernoffTilt, MaxMoments, NbSummary

__all__ = [
    "ChannelSpec",
    "ChernoffTilt",
    "MaxMoments",
    "NbSummary",
    "beta_k",
    "chernoff_tail",
    "chernoff_tilt",
    "conditional_mean",
    "conditional_mean_table",
    "log_mgf",
    "max_nb_cdf",
    "max_nb_moments",
    "nb_cdf",
    "nb_cdf_table",
    "nb_moments",
    "nb_pmf",
    "nb_pmf_table",
    "nb_sf",
]
