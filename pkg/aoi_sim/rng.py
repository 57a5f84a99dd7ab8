"""
Reproducible random streams.

Every replication gets its own generator, keyed by the run seed and a
spawn key (sweep index, replication index). Streams keyed differently are
statistically independent, and a stream never depends on how many other
streams were created or in which order they are consumed.
"""

from numpy.random import SFC64, Generator, SeedSequence


def replication_generator(seed: int, *key: int) -> Generator:
    """
    Generator for the stream ``key`` under ``seed``.

    :param seed: 64-bit unsigned run seed.
    :param key: Spawn key, e.g. ``(sweep_index, replication)``.
    """
    return Generator(SFC64(SeedSequence(seed, spawn_key=tuple(key))))
