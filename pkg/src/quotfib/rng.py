"""Deterministic, splittable random streams derived from a single seed."""
import zlib

import numpy as np


def _key(part) -> int:
    if isinstance(part, int):
        return part & 0xFFFFFFFF
    return zlib.crc32(str(part).encode())


def make_rng(seed: int, *stream) -> np.random.Generator:
    """A generator for the named sub-stream of ``seed``.

    Distinct ``stream`` keys give statistically independent generators, and the
    same (seed, stream) always reproduces the same draws.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *map(_key, stream)])))
