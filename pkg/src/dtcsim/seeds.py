"""Deterministic seed derivation for disorder draws and measurement sampling.

All randomness in a run descends from a single 64-bit master seed through
``numpy.random.SeedSequence`` hashing: a child seed is obtained by mixing the
master seed with a stream label and any number of integer coordinates.  The
two stream labels keep disorder realizations and measurement records on
independent streams, so the disorder drawn for realization ``r`` never changes
when the protocol, grid point, or trajectory count changes.

Grid-point coordinates enter the key by value (IEEE-754 bit patterns), not by
position, so reordering a sweep grid does not reassign seeds.
"""

from __future__ import annotations

import numpy as np

DISORDER_STREAM = 0x11
MEASUREMENT_STREAM = 0x22


def float_key(x: float) -> int:
    """Stable integer key for a float: its raw IEEE-754 bit pattern."""
    return int(np.float64(x).view(np.uint64))


def derive_seed(master_seed: int, stream: int, *coords: int) -> int:
    """Derive a child 64-bit seed from the master seed and integer coordinates.

    The same (master, stream, coords) always yields the same child, and
    distinct coordinate tuples yield statistically independent children.
    """
    ss = np.random.SeedSequence([int(master_seed), int(stream), *map(int, coords)])
    return int(ss.generate_state(1, np.uint64)[0])


def disorder_seed(master_seed: int, realization: int) -> int:
    """Seed for the disorder draw of one realization (grid-point independent)."""
    return derive_seed(master_seed, DISORDER_STREAM, realization)


def measurement_seed(master_seed: int, realization: int, trajectory: int,
                     beta: float, gamma: float, axis: str) -> int:
    """Seed for the outcome sampling of one trajectory at one grid point."""
    return derive_seed(
        master_seed, MEASUREMENT_STREAM, realization, trajectory,
        float_key(beta), float_key(gamma), 0 if axis == "z" else 1,
    )


def rng_from_seed(seed: int) -> np.random.Generator:
    """PCG64 generator for a derived seed."""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))
