"""Purpose-tagged RNG streams derived from a master seed"""

import hashlib
from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator]


def tag_entropy(tag: Union[str, int]) -> int:
    """Stable 64-bit integer for a purpose tag (Python's hash() is salted per process)"""
    digest = hashlib.sha256(str(tag).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed(master_seed: int, *tags: Union[str, int]) -> int:
    """Integer seed for (master seed, tag, ...) that never collides with sibling tags"""
    sequence = np.random.SeedSequence([int(master_seed)] + [tag_entropy(t) for t in tags])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def derive_rng(master_seed: int, *tags: Union[str, int]) -> np.random.Generator:
    """
    Independent generator for one purpose within a run

    Adding a new consumer (a probe, a new tag) never shifts the draws of
    existing consumers, because each tag gets its own SeedSequence.
    """
    sequence = np.random.SeedSequence([int(master_seed)] + [tag_entropy(t) for t in tags])
    return np.random.default_rng(sequence)


def as_rng(seed: SeedLike) -> np.random.Generator:
    """Accept an int seed or an existing generator"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
