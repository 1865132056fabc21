"""Reproducible, splittable random number streams.

All randomness in the package flows from a single master seed.  Independent
streams are derived with ``numpy.random.SeedSequence`` spawn keys, so a
replicate's stream depends only on ``(seed, *stream_ids)`` and never on how
the work was scheduled across threads or processes.  The underlying bit
generator is Philox (counter based), which makes stream construction cheap.
"""

from __future__ import annotations

import numpy as np


def stream(seed: int, *ids: int) -> np.random.Generator:
    """Generator for the stream identified by ``(seed, *ids)``.

    The same arguments always yield the same stream, independent of call
    order and worker count.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(ids))
    return np.random.Generator(np.random.Philox(ss))


def fresh_seed() -> int:
    """Draw a new master seed from OS entropy (for CLI runs without --seed)."""
    return int(np.random.SeedSequence().entropy % (2**63))
