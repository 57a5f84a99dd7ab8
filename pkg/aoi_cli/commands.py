"""
Command implementations.

Each ``cmd_*`` function takes already-parsed parameters, calls the library
and returns an :class:`~aoi_cli.output.OutputRecord`. The numbers placed in
the rows are exactly the values returned by the library calls.
"""

import logging
import math
from dataclasses import asdict

from common import config
from common.utils.exceptions import CltUnavailableError, InvalidParameterError
from common.utils.validators import require_int
from erasure_stats import ChannelSpec, nb_moments
from aoi_analytic import (
    DEFAULT_M_LIMIT,
    find_crossover,
    fr_age,
    fr_curve,
    fr_optimize,
    iir_age,
    iir_age_multi,
    iir_age_multi_curve,
    n_hat_clt,
)
from aoi_sim import InitialAge, Scheme, SchemeKind, SimConfig, VariateMode, simulate, simulate_sweep
from aoi_cli.output import OutputRecord

logger = logging.getLogger(__name__)


def cmd_iir(k: int, delta: float, m: int | None = None, tol: float = config.DEFAULT_TOL) -> OutputRecord:
    """
    Single-monitor IIR age, plus the ``m``-monitor age when ``m`` is given.

    :param k: Symbols per update.
    :param delta: Erasure probability.
    :param m: Optional number of monitors.
    :param tol: Tolerance of the multi-monitor moment sums.
    """
    spec = ChannelSpec(k, delta)
    summary = nb_moments(spec)
    single = iir_age(spec)
    row = {
        "k": spec.k,
        "delta": spec.delta,
        "mu_k": summary.mu_k,
        "sigma2_k": summary.sigma2_k,
        "age": single.age,
        "zero_wait_optimal": single.zero_wait_optimal,
    }
    if m is not None:
        row["m"] = m
        row["age_multi"] = iir_age_multi(spec, m, tol)
    return OutputRecord(command="iir", params={"k": k, "delta": delta, "m": m, "tol": tol}, rows=[row])


def _nearest_index(values: list[int], target: int) -> int:
    return min(range(len(values)), key=lambda i: abs(values[i] - target))


def cmd_fr_curve(k: int, deltas, n_min: int | None = None, n_max: int | None = None, step: int = 1,
                 normalize: bool = False, bound: bool = False) -> OutputRecord:
    """
    FR age over a range of packet lengths, one curve per erasure probability.

    ``n_min`` defaults to ``k`` and ``n_max`` to ``ceil(2 k/(1-delta))``. The
    row nearest the CLT packet length is flagged ``is_n_hat``. With
    ``normalize`` the packet length and the ages are divided by
    ``k/(1-delta)``.

    :raises InvalidParameterError: If ``k <= n_min <= n_max`` fails or ``step < 1``.
    """
    step = require_int("step", step, minimum=1)
    rows = []
    for delta in deltas:
        spec = ChannelSpec(k, delta)
        low = spec.k if n_min is None else require_int("n_min", n_min)
        high = math.ceil(2.0 * spec.mu) if n_max is None else require_int("n_max", n_max)
        if not spec.k <= low <= high:
            raise InvalidParameterError(
                f"packet range must satisfy k <= n_min <= n_max, got k={spec.k}, n_min={low}, n_max={high}"
            )
        ns = list(range(low, high + 1, step))
        points = fr_curve(spec, ns)
        try:
            target = spec.k if spec.delta == 0.0 else n_hat_clt(spec)
            marked = _nearest_index(ns, target)
        except CltUnavailableError as exc:
            logger.warning("%s; no row marked for delta=%g", exc, spec.delta)
            marked = None

        unit = spec.mu
        for i, point in enumerate(points):
            row = {"delta": spec.delta, "n": point.n}
            if normalize:
                row["n_norm"] = point.n / unit
                row["age_norm"] = point.age / unit
                if bound:
                    row["upper_bound_norm"] = point.upper_bound / unit
            else:
                row["age"] = point.age
                if bound:
                    row["upper_bound"] = point.upper_bound
            row["epsilon_n"] = point.epsilon_n
            row["mu_tilde_n"] = point.mu_tilde_n
            row["is_n_hat"] = i == marked
            rows.append(row)

    params = {"k": k, "delta": list(deltas), "n_min": n_min, "n_max": n_max, "step": step,
              "normalize": normalize, "bound": bound}
    return OutputRecord(command="fr-curve", params=params, rows=rows)


def cmd_fr_opt(k: int, delta: float, eta0: float = config.DEFAULT_ETA0) -> OutputRecord:
    """Exact and CLT-approximate optimal packet length with every bound."""
    spec = ChannelSpec(k, delta)
    result = fr_optimize(spec, eta0)
    row = {"k": spec.k, "delta": spec.delta, **asdict(result)}
    return OutputRecord(command="fr-opt", params={"k": k, "delta": delta, "eta0": eta0}, rows=[row])


def cmd_iir_multi_sweep(k: int, deltas, m_max: int, m_limit: int = DEFAULT_M_LIMIT,
                        tol: float = config.DEFAULT_TOL) -> OutputRecord:
    """
    Normalised multi-monitor IIR age for ``m = 1..m_max`` against the FR bound.

    The FR line is the upper bound at the CLT packet length; it does not
    depend on ``m``. ``first_crossover_m`` is searched up to ``m_limit``
    independently of ``m_max`` and is empty if there is none.
    """
    m_max = require_int("m_max", m_max, minimum=1)
    rows = []
    for delta in deltas:
        spec = ChannelSpec(k, delta)
        crossover = find_crossover(spec, m_limit, tol)
        ms = list(range(1, m_max + 1))
        for m, age in zip(ms, iir_age_multi_curve(spec, ms, tol)):
            rows.append({
                "delta": spec.delta,
                "m": m,
                "iir_age": age,
                "iir_age_norm": age / spec.mu,
                "fr_bound_norm": crossover.fr_bound_norm,
                "first_crossover_m": crossover.m,
            })
    params = {"k": k, "delta": list(deltas), "m_max": m_max, "m_limit": m_limit, "tol": tol}
    return OutputRecord(command="iir-multi-sweep", params=params, rows=rows)


def _scheme(kind: str, m: int | None, n: int | None) -> Scheme:
    kind = SchemeKind(kind)
    if m is not None and kind is not SchemeKind.IIR_MULTI:
        raise InvalidParameterError(f"m only applies to the iir_multi scheme, not {kind.value}")
    if n is not None and kind is not SchemeKind.FR:
        raise InvalidParameterError(f"n only applies to the fr scheme, not {kind.value}")
    if kind is SchemeKind.IIR:
        return Scheme.iir()
    if kind is SchemeKind.IIR_MULTI:
        if m is None:
            raise InvalidParameterError("m is required for the iir_multi scheme")
        return Scheme.iir_multi(m)
    if n is None:
        raise InvalidParameterError("n is required for the fr scheme")
    return Scheme.fr(n)


def _analytic(spec: ChannelSpec, scheme: Scheme, tol: float) -> float:
    if scheme.kind is SchemeKind.IIR:
        return iir_age(spec).age
    if scheme.kind is SchemeKind.IIR_MULTI:
        return iir_age_multi(spec, scheme.m, tol)
    return fr_age(spec, scheme.n).age


def z_score(simulated: float, analytic: float, stderr: float) -> float:
    """Standardised discrepancy; with no spread it is ``0`` on equality and ``inf`` otherwise."""
    if stderr > 0.0:
        return (simulated - analytic) / stderr
    return 0.0 if simulated == analytic else math.inf


def cmd_verify(k: int, delta: float, scheme: str, m: int | None = None, n: int | None = None,
               horizon: int = config.DEFAULT_HORIZON, seed: int = config.DEFAULT_SEED,
               reps: int = config.DEFAULT_REPS, variates: str = VariateMode.FAST.value,
               initial_age: str = InitialAge.RENEWAL.value, tol: float = config.DEFAULT_TOL,
               z_limit: float = config.VERIFY_Z_LIMIT) -> OutputRecord:
    """
    Compare the closed-form age of one scheme with a simulation.

    The row's ``passed`` column is ``|z| <= z_limit``; the caller turns a
    failure into exit code 1.
    """
    spec = ChannelSpec(k, delta)
    chosen = _scheme(scheme, m, n)
    sim_config = SimConfig(spec, chosen, horizon, seed, reps, VariateMode(variates), InitialAge(initial_age))
    analytic = _analytic(spec, chosen, tol)
    result = simulate(sim_config)
    z = z_score(result.avg_age, analytic, result.avg_age_stderr)
    slots = result.updates_delivered + result.updates_discarded
    row = {
        "scheme": chosen.kind.value,
        "k": spec.k,
        "delta": spec.delta,
        "m": chosen.m,
        "n": chosen.n,
        "analytic": analytic,
        "simulated": result.avg_age,
        "stderr": result.avg_age_stderr,
        "z": z,
        "discard_fraction": result.updates_discarded / slots,
        "passed": abs(z) <= z_limit,
    }
    if not row["passed"]:
        logger.warning("verification failed: %s age %.8g vs %.8g (z=%.3g)",
                       chosen.kind.value, result.avg_age, analytic, z)
    params = {"k": k, "delta": delta, "scheme": chosen.kind.value, "m": m, "n": n, "horizon": horizon,
              "seed": seed, "reps": reps, "variates": variates, "initial_age": initial_age,
              "z_limit": z_limit}
    return OutputRecord(command="verify", params=params, rows=[row])


def cmd_sim_sweep(k: int, delta: float, scheme: str, values, horizon: int = config.DEFAULT_HORIZON,
                  seed: int = config.DEFAULT_SEED, reps: int = config.DEFAULT_REPS,
                  variates: str = VariateMode.FAST.value, initial_age: str = InitialAge.RENEWAL.value,
                  tol: float = config.DEFAULT_TOL) -> OutputRecord:
    """
    Simulate an FR scheme over ``n`` or an IIR_MULTI scheme over ``m``.

    Each row holds the simulated age with its standard error next to the
    closed-form value.
    """
    values = [require_int("value", v, minimum=1) for v in values]
    if not values:
        raise InvalidParameterError("at least one sweep value is required")
    spec = ChannelSpec(k, delta)
    kind = SchemeKind(scheme)
    if kind is SchemeKind.IIR:
        raise InvalidParameterError("sim-sweep needs the fr or iir_multi scheme")
    first = Scheme.fr(values[0]) if kind is SchemeKind.FR else Scheme.iir_multi(values[0])
    base = SimConfig(spec, first, horizon, seed, reps, VariateMode(variates), InitialAge(initial_age))

    rows = []
    for value, result in simulate_sweep(base, values):
        chosen = first.with_value(value)
        rows.append({
            "scheme": kind.value,
            "value": value,
            "simulated": result.avg_age,
            "stderr": result.avg_age_stderr,
            "analytic": _analytic(spec, chosen, tol),
            "updates_delivered": result.updates_delivered,
            "updates_discarded": result.updates_discarded,
        })
    params = {"k": k, "delta": delta, "scheme": kind.value, "values": values, "horizon": horizon,
              "seed": seed, "reps": reps, "variates": variates, "initial_age": initial_age}
    return OutputRecord(command="sim-sweep", params=params, rows=rows)
