"""Monte Carlo simulation of the age of information over an erasure channel."""

from aoi_sim.rng import replication_generator
from aoi_sim.sawtooth import integrate_sawtooth
from aoi_sim.schemas import InitialAge, Scheme, SchemeKind, SimConfig, SimResult, VariateMode
from aoi_sim.simulator import simulate, simulate_sweep
from aoi_sim.variates import DeliveryTimeSampler

__all__ = [
    "DeliveryTimeSampler",
    "InitialAge",
    "Scheme",
    "SchemeKind",
    "SimConfig",
    "SimResult",
    "VariateMode",
    "integrate_sawtooth",
    "replication_generator",
    "simulate",
    "simulate_sweep",
]
