"""Named, counter-based random streams.

Every stream is a Philox generator keyed by ``(master_seed, label, index)``, so
results do not depend on the order in which parallel work is scheduled.
"""

from __future__ import annotations

import zlib

import numpy as np


def label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def rng_stream(master_seed: int, label: str, index: int = 0) -> np.random.Generator:
    if not 0 <= master_seed < 2**64:
        raise ValueError("master_seed must be a 64-bit unsigned integer")
    seq = np.random.SeedSequence([master_seed & 0xFFFFFFFF, master_seed >> 32, label_key(label), index])
    return np.random.Generator(np.random.Philox(seq))
