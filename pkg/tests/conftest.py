import logging
import os
import sys
from fractions import Fraction

PROJECT_ROOT = os.path.dirname(os.path.dirname(__file__))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

import pytest

from erasure_stats import ChannelSpec
from aoi_sim import Scheme, SimConfig


@pytest.fixture
def small_channel():
    """
    A short update over a lossy channel.

    Small enough for exhaustive enumeration in a few hundred milliseconds,
    lossy enough that every tail quantity is far from trivial.
    """
    return ChannelSpec(5, 0.3)


@pytest.fixture
def lossless_channel():
    """The erasure-free channel used by the deterministic checks (k=5)."""
    return ChannelSpec(5, 0.0)


@pytest.fixture
def make_config():
    """
    Build a :class:`SimConfig` with test-friendly defaults.

    Keyword arguments override the defaults, so each test spells out only
    what it cares about.
    """
    def _make(spec, scheme=None, **overrides):
        fields = {"horizon": 20000, "seed": 12345, "replications": 4}
        fields.update(overrides)
        return SimConfig(spec, scheme or Scheme.iir(), **fields)

    return _make


@pytest.fixture
def decoding_slots():
    """
    Exact distribution of the slot at which the k-th symbol gets through.

    Erasure patterns are grouped by how many symbols were received so far,
    and the group probabilities are carried forward one symbol at a time in
    rational arithmetic. Entry ``t`` of the returned list is the probability
    that symbol ``t + 1`` completes the update.
    """
    def _slots(k: int, delta: float, length: int) -> list[Fraction]:
        erased = Fraction(delta)
        received = 1 - erased
        groups = [Fraction(1)] + [Fraction(0)] * (k - 1)
        slots = []
        for _ in range(length):
            slots.append(groups[k - 1] * received)
            groups = [groups[0] * erased] + [groups[j] * erased + groups[j - 1] * received for j in range(1, k)]
        return slots

    return _slots


@pytest.fixture(autouse=True)
def _drop_cli_log_handlers():
    """
    Remove the stderr handler the CLI installs.

    It is bound to the stream captured for the test that created it, which
    is closed once that test ends.
    """
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_aoi_handler", False):
            root.removeHandler(handler)
