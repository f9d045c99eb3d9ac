"""Seeded, labeled random substreams.

Every random quantity in the package is derived from a recorded 64-bit seed
and a short label (``"perm"``, ``"rows"``, ``"theta"`` ...), so that two
draws with different labels are independent even under the same seed.
"""

from __future__ import annotations

import zlib

import numpy as np

from .errors import InvalidArgumentError

PRNG_ID = "numpy-pcg64-seedseq-crc32"

_U64 = (1 << 64) - 1


def check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= int(seed) <= _U64:
        raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def substream(seed: int, label: str) -> np.random.Generator:
    """Generator for the ``label`` substream of ``seed``."""
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=(zlib.crc32(label.encode("utf-8")),))
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(seed: int, label: str) -> int:
    """A fresh 64-bit seed for ``label``, deterministic in ``seed``."""
    return int(substream(seed, label).integers(0, _U64, dtype=np.uint64, endpoint=True))
