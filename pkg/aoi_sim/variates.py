"""
Delivery-time variates.

Two ways to draw the delivery time ``X_k`` of an update:

- ``SYMBOL`` transmits symbols one by one, each erased with probability
  ``delta``, and records where the ``k``-th received symbol falls. This is
  the channel model itself.
- ``FAST`` draws one uniform per update and inverts the tabulated CDF.

With a packet length ``cap`` (FR), a packet in which fewer than ``k``
symbols survive is reported as ``cap + 1``.
"""

import logging
import math

import numpy as np
from scipy import stats

from common.utils.validators import require_int
from erasure_stats import ChannelSpec, chernoff_tilt, nb_cdf_table, nb_moments
from aoi_sim.schemas import VariateMode

logger = logging.getLogger(__name__)

# Tables stop where the Chernoff tail is below this; later draws use scipy's ppf.
TABLE_TAIL_LOG = -64.0 * math.log(2.0)

# Symbols generated per packet block in symbol mode.
SYMBOL_BLOCK = 1 << 20


def inversion_table_end(spec: ChannelSpec) -> int:
    """Smallest tabulated length whose Chernoff tail is below ``2**-64``."""
    summary = nb_moments(spec)
    step = max(16, math.ceil(summary.sigma_k))
    n = math.ceil(summary.mu_k) + step
    while chernoff_tilt(spec, n).log_bound > TABLE_TAIL_LOG:
        n += step
        step *= 2
    return n


class DeliveryTimeSampler:
    """
    Draws iid delivery times for one channel.

    :param spec: Channel.
    :param mode: Variate generation mode.
    :param cap: Packet length for FR; ``None`` for unbounded (IIR) updates.
    """

    def __init__(self, spec: ChannelSpec, mode: VariateMode = VariateMode.FAST, cap: int | None = None):
        self.spec = spec
        self.mode = VariateMode(mode)
        self.cap = None if cap is None else require_int("cap", cap, minimum=spec.k)
        self._cdf = None
        if self.mode is VariateMode.FAST and spec.delta > 0.0:
            end = self.cap if self.cap is not None else inversion_table_end(spec)
            self._cdf = nb_cdf_table(spec, end)
            logger.debug("inversion table k=%d delta=%g: %d entries", spec.k, spec.delta, len(self._cdf))

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        ``size`` iid delivery times as an ``int64`` array.

        :param rng: Generator owning the stream to consume.
        :param size: Number of variates.
        """
        size = require_int("size", size, minimum=0)
        if self.spec.delta == 0.0:
            return np.full(size, self.spec.k, dtype=np.int64)
        if self.mode is VariateMode.FAST:
            return self._draw_inversion(rng, size)
        if self.cap is not None:
            return self._draw_packets(rng, size)
        return self._draw_stream(rng, size)

    def _draw_inversion(self, rng, size):
        k = self.spec.k
        u = rng.random(size)
        idx = np.searchsorted(self._cdf, u, side="left")
        x = (k + idx).astype(np.int64)
        beyond = idx >= len(self._cdf)
        if np.any(beyond):
            if self.cap is not None:
                x[beyond] = self.cap + 1
            else:
                logger.warning("%d variates beyond the inversion table, using scipy ppf", int(beyond.sum()))
                x[beyond] = k + stats.nbinom.ppf(u[beyond], k, 1.0 - self.spec.delta).astype(np.int64)
        return x

    def _draw_stream(self, rng, size):
        # One long symbol stream: update i ends at the (i*k)-th received symbol.
        k, delta = self.spec.k, self.spec.delta
        needed = size * k
        if needed == 0:
            return np.empty(0, dtype=np.int64)
        found = []
        total = 0
        offset = 0
        while total < needed:
            chunk = max(4096, int((needed - total) / (1.0 - delta) * 1.05) + 64)
            received = np.flatnonzero(rng.random(chunk) >= delta) + offset + 1
            found.append(received)
            total += len(received)
            offset += chunk
        completions = np.concatenate(found)[k - 1:needed:k]
        return np.diff(completions, prepend=0).astype(np.int64)

    def _draw_packets(self, rng, size):
        k, delta, n = self.spec.k, self.spec.delta, self.cap
        out = np.empty(size, dtype=np.int64)
        rows = max(1, SYMBOL_BLOCK // n)
        for start in range(0, size, rows):
            count = min(rows, size - start)
            running = np.cumsum(rng.random((count, n)) >= delta, axis=1)
            decoded = running[:, -1] >= k
            position = np.argmax(running >= k, axis=1) + 1
            out[start:start + count] = np.where(decoded, position, n + 1)
        return out
