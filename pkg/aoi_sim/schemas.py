"""
Schemas for the Monte Carlo simulator.

A :class:`SimConfig` fully determines a run: two runs with equal configs
produce equal :class:`SimResult` objects, bit for bit.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

from common.utils.exceptions import InvalidParameterError
from common.utils.validators import require_int, require_seed
from erasure_stats import ChannelSpec


class SchemeKind(str, Enum):
    """Coding strategy being simulated."""
    IIR = "iir"
    IIR_MULTI = "iir_multi"
    FR = "fr"


class VariateMode(str, Enum):
    """How delivery times are drawn.

    ``SYMBOL`` plays out every symbol as a Bernoulli erasure; ``FAST``
    inverts the delivery-time CDF with one uniform per update.
    """
    FAST = "fast"
    SYMBOL = "symbol"


class InitialAge(str, Enum):
    """Age at time zero.

    ``RENEWAL`` starts right after a delivery, as if the channel had already
    been running: ``X_0`` for IIR, ``Y_0`` for IIR with several monitors and
    ``n`` for FR. ``ZERO`` starts from ``Delta(0) = 0``.
    """
    RENEWAL = "renewal"
    ZERO = "zero"


@dataclass(frozen=True)
class Scheme:
    """
    Coding strategy with its parameter.

    Attributes
    ----------
    kind : SchemeKind
        IIR, IIR with ``m`` monitors, or FR with packet length ``n``.
    m : int
        Number of monitors (``1`` unless ``kind`` is ``IIR_MULTI``).
    n : int | None
        Packet length for FR, ``None`` otherwise.
    """
    kind: SchemeKind
    m: int = 1
    n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        object.__setattr__(self, "m", require_int("m", self.m, minimum=1))
        if self.kind is SchemeKind.FR:
            if self.n is None:
                raise InvalidParameterError("n is required for the FR scheme")
            object.__setattr__(self, "n", require_int("n", self.n, minimum=1))
        elif self.n is not None:
            raise InvalidParameterError(f"n only applies to the FR scheme, not {self.kind.value}")
        if self.kind is not SchemeKind.IIR_MULTI and self.m != 1:
            raise InvalidParameterError(f"m only applies to the iir_multi scheme, not {self.kind.value}")

    @classmethod
    def iir(cls) -> "Scheme":
        return cls(SchemeKind.IIR)

    @classmethod
    def iir_multi(cls, m: int) -> "Scheme":
        return cls(SchemeKind.IIR_MULTI, m=m)

    @classmethod
    def fr(cls, n: int) -> "Scheme":
        return cls(SchemeKind.FR, n=n)

    def with_value(self, value: int) -> "Scheme":
        """Copy with the swept parameter replaced: ``n`` for FR, ``m`` for IIR_MULTI."""
        if self.kind is SchemeKind.FR:
            return replace(self, n=value)
        if self.kind is SchemeKind.IIR_MULTI:
            return replace(self, m=value)
        raise InvalidParameterError("the iir scheme has no parameter to sweep")


@dataclass(frozen=True)
class SimConfig:
    """
    A simulation run.

    Attributes
    ----------
    spec : ChannelSpec
        Channel (every monitor has its own independent copy).
    scheme : Scheme
        Coding strategy.
    horizon : int
        Updates per replication for IIR schemes, packet slots for FR.
    seed : int
        64-bit unsigned seed.
    replications : int
        Independent replications; the standard error is taken across them.
    variates : VariateMode
        Delivery-time generation mode.
    initial_age : InitialAge
        Age at time zero.
    stream : tuple of int
        Spawn-key prefix; sweeps give each swept value its own prefix.
    """
    spec: ChannelSpec
    scheme: Scheme
    horizon: int
    seed: int
    replications: int = 1
    variates: VariateMode = VariateMode.FAST
    initial_age: InitialAge = InitialAge.RENEWAL
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "horizon", require_int("horizon", self.horizon, minimum=1))
        object.__setattr__(self, "seed", require_seed("seed", self.seed))
        object.__setattr__(self, "replications", require_int("replications", self.replications, minimum=1))
        object.__setattr__(self, "variates", VariateMode(self.variates))
        object.__setattr__(self, "initial_age", InitialAge(self.initial_age))
        object.__setattr__(self, "stream", tuple(require_int("stream", s, minimum=0) for s in self.stream))
        if self.scheme.kind is SchemeKind.FR and self.scheme.n < self.spec.k:
            raise InvalidParameterError(f"n must satisfy n >= k = {self.spec.k}, got {self.scheme.n}")


@dataclass(frozen=True)
class SimResult:
    """
    Outcome of a simulation run.

    Attributes
    ----------
    avg_age : float
        Mean over replications of the time-average age.
    avg_age_stderr : float
        Standard error of ``avg_age`` across replications (``0`` for one).
    updates_delivered : int
        Updates decoded by the tracked monitor, over all replications.
    updates_discarded : int
        FR packets with fewer than ``k`` surviving symbols; ``0`` for IIR.
    elapsed_slots : int
        Simulated time in symbol slots, over all replications.
    replication_ages : tuple of float
        Per-replication time-average ages, in replication order.
    renewal_cycles : int
        Complete FR renewal cycles observed (``0`` for IIR).
    renewal_slots_mean : float | None
        Mean FR cycle length in packet slots, ``None`` for IIR.
    delivery_position_mean : float
        Mean decoding slot of delivered updates (within their packet for FR).
    """
    avg_age: float
    avg_age_stderr: float
    updates_delivered: int
    updates_discarded: int
    elapsed_slots: int
    replication_ages: tuple[float, ...] = field(default=())
    renewal_cycles: int = 0
    renewal_slots_mean: float | None = None
    delivery_position_mean: float = 0.0
