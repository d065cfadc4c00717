# random_streams.py
# Named, seedable random streams shared by the segmenter, selector and simulator
"""
Every consumer asks for a stream by (seed, *key). The key is mapped onto a
numpy ``SeedSequence`` spawn key and drives a Philox4x64-10 counter-based
bit generator, so a stream depends only on its seed and key and never on how
many draws other streams made. String key parts are mapped to integers with
CRC-32 so the mapping is stable across Python versions and platforms.

Stream keys in use:
    ("intervals",)                      random intervals of one detect run
    ("directions", level, eta)          projection directions of one KS test
    ("scenario", id, segment, t)        observation t of a simulated sample
"""

import zlib
from typing import Union

import numpy as np

RNG_ALGORITHM = "Philox4x64-10 via numpy SeedSequence(entropy=seed, spawn_key=key)"

KeyPart = Union[int, str]


def _key_part(part: KeyPart) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if part < 0:
        raise ValueError(f"stream key parts must be non-negative, got {part}")
    return int(part)


def stream(seed: int, *key: KeyPart) -> np.random.Generator:
    """Independent generator for (seed, *key)"""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_key_part(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))
