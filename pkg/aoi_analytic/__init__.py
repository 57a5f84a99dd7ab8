"""Closed-form average ages for IIR and FR updating over an erasure channel."""

from aoi_analytic.crossover import DEFAULT_M_LIMIT, find_crossover
from aoi_analytic.fr import (
    fr_age,
    fr_curve,
    fr_opt_age_bound,
    fr_optimize,
    n_hat_clt,
    n_hat_real,
    w_k,
    z_star,
)
from aoi_analytic.iir import iir_age, iir_age_multi, iir_age_multi_curve, zero_wait_threshold
from aoi_analytic.schemas import Crossover, FrCurvePoint, IirAge, OptResult

__all__ = [
    "DEFAULT_M_LIMIT",
    "Crossover",
    "FrCurvePoint",
    "IirAge",
    "OptResult",
    "find_crossover",
    "fr_age",
    "fr_curve",
    "fr_opt_age_bound",
    "fr_optimize",
    "iir_age",
    "iir_age_multi",
    "iir_age_multi_curve",
    "n_hat_clt",
    "n_hat_real",
    "w_k",
    "z_star",
]
