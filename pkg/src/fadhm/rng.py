"""Deterministic random streams and exact random rationals.

Every stochastic task draws from a numpy Generator seeded by the root seed
and a task path, so adding samples to one task never perturbs another.
"""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np


def substream(seed: int, *path) -> np.random.Generator:
    key = tuple(zlib.crc32(str(p).encode()) for p in path)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=key))


def rand_fraction(rng: np.random.Generator, bound: int = 9, den: int = 4) -> Fraction:
    """Uniform numerator in [-bound, bound] over a denominator in [1, den]."""
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, den + 1)))


def rand_nonzero(rng: np.random.Generator, bound: int = 9, den: int = 4) -> Fraction:
    while True:
        x = rand_fraction(rng, bound, den)
        if x:
            return x


def rand_distinct(rng: np.random.Generator, n: int, bound: int = 20, den: int = 3) -> list[Fraction]:
    out: list[Fraction] = []
    while len(out) < n:
        x = rand_fraction(rng, bound, den)
        if x not in out:
            out.append(x)
    return out
