"""
Monte Carlo estimate of the time-average age.

Each replication draws its own delivery times from its own random stream,
computes the exact area under the age sawtooth and divides by the elapsed
time. Replications are combined by their mean, with the standard error
taken across them.
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from common.utils.exceptions import InvalidParameterError, SimulationError
from aoi_sim.rng import replication_generator
from aoi_sim.sawtooth import fr_slot_areas, iir_polygon_area, multi_polygon_area
from aoi_sim.schemas import InitialAge, SchemeKind, SimConfig, SimResult
from aoi_sim.variates import DeliveryTimeSampler

logger = logging.getLogger(__name__)


@dataclass
class _Replication:
    area: float
    elapsed: int
    delivered: int
    discarded: int = 0
    cycles: int = 0
    cycle_slots: int = 0
    delivery_sum: int = 0

    @property
    def age(self) -> float:
        return self.area / self.elapsed


def _run_iir(config: SimConfig, sampler: DeliveryTimeSampler, rng) -> _Replication:
    x0 = float(sampler.draw(rng, 1)[0]) if config.initial_age is InitialAge.RENEWAL else 0.0
    x = sampler.draw(rng, config.horizon)
    elapsed = int(x.sum())
    return _Replication(
        area=iir_polygon_area(x, x0),
        elapsed=elapsed,
        delivered=len(x),
        delivery_sum=elapsed,
    )


def _run_iir_multi(config: SimConfig, sampler: DeliveryTimeSampler, rng) -> _Replication:
    m = config.scheme.m
    y0 = float(sampler.draw(rng, m).max()) if config.initial_age is InitialAge.RENEWAL else 0.0
    draws = sampler.draw(rng, config.horizon * m).reshape(config.horizon, m)
    y = draws.max(axis=1)
    x1 = draws[:, 0]
    return _Replication(
        area=multi_polygon_area(y, x1, y0),
        elapsed=int(y.sum()),
        delivered=len(y),
        delivery_sum=int(x1.sum()),
    )


def _run_fr(config: SimConfig, sampler: DeliveryTimeSampler, rng) -> _Replication:
    n = config.scheme.n
    x = sampler.draw(rng, config.horizon)
    delivered = np.flatnonzero(x <= n)
    if len(delivered) == 0:
        raise SimulationError(
            f"no packet decoded in {config.horizon} slots (k={config.spec.k}, delta={config.spec.delta}, n={n})"
        )
    renewal = config.initial_age is InitialAge.RENEWAL
    areas = fr_slot_areas(x, n, initial_age=float(n) if renewal else 0.0)
    # A renewal start makes slot 0 the first slot of a complete cycle.
    first = -1 if renewal else int(delivered[0])
    cycles = len(delivered) if renewal else len(delivered) - 1
    return _Replication(
        area=math.fsum(areas),
        elapsed=config.horizon * n,
        delivered=len(delivered),
        discarded=config.horizon - len(delivered),
        cycles=cycles,
        cycle_slots=int(delivered[-1]) - first,
        delivery_sum=int(x[delivered].sum()),
    )


_RUNNERS = {
    SchemeKind.IIR: _run_iir,
    SchemeKind.IIR_MULTI: _run_iir_multi,
    SchemeKind.FR: _run_fr,
}


def _sampler_for(config: SimConfig) -> DeliveryTimeSampler:
    cap = config.scheme.n if config.scheme.kind is SchemeKind.FR else None
    return DeliveryTimeSampler(config.spec, config.variates, cap=cap)


def simulate(config: SimConfig) -> SimResult:
    """
    Run ``config.replications`` independent replications and combine them.

    :param config: Fully specified run; equal configs give equal results.
    :returns: Mean time-average age with its standard error and counters.
    :raises SimulationError: If an FR replication decodes no packet at all.
    """
    sampler = _sampler_for(config)
    runner = _RUNNERS[config.scheme.kind]
    replications = []
    for rep in range(config.replications):
        rng = replication_generator(config.seed, *config.stream, rep)
        outcome = runner(config, sampler, rng)
        logger.info(
            "%s k=%d delta=%g rep=%d: age=%.6g over %d slots",
            config.scheme.kind.value, config.spec.k, config.spec.delta, rep, outcome.age, outcome.elapsed,
        )
        replications.append(outcome)

    ages = np.array([r.age for r in replications])
    stderr = float(ages.std(ddof=1) / math.sqrt(len(ages))) if len(ages) > 1 else 0.0
    delivered = sum(r.delivered for r in replications)
    cycles = sum(r.cycles for r in replications)
    renewal_slots_mean = None
    if config.scheme.kind is SchemeKind.FR:
        renewal_slots_mean = sum(r.cycle_slots for r in replications) / cycles if cycles else math.nan

    return SimResult(
        avg_age=math.fsum(ages) / len(ages),
        avg_age_stderr=stderr,
        updates_delivered=delivered,
        updates_discarded=sum(r.discarded for r in replications),
        elapsed_slots=sum(r.elapsed for r in replications),
        replication_ages=tuple(float(a) for a in ages),
        renewal_cycles=cycles,
        renewal_slots_mean=renewal_slots_mean,
        delivery_position_mean=sum(r.delivery_sum for r in replications) / delivered,
    )


def simulate_sweep(base: SimConfig, values) -> list[tuple[int, SimResult]]:
    """
    Simulate ``base`` once per swept value (``n`` for FR, ``m`` for IIR_MULTI).

    Value ``i`` runs on the stream ``base.stream + (i,)``, so results do not
    depend on which other values are in the sweep, only on their position.

    :param base: Configuration whose scheme parameter is replaced.
    :param values: Swept parameter values.
    """
    values = list(values)
    if not values:
        raise InvalidParameterError("values must not be empty")
    results = []
    for index, value in enumerate(values):
        config = replace(base, scheme=base.scheme.with_value(value), stream=base.stream + (index,))
        results.append((value, simulate(config)))
    return results
