"""Counter-based splittable random streams.

One master seed fans out into independent generators addressed by a
purpose constant plus integer coordinates (typically agent index and
iteration). Any consumer can re-derive the exact stream used at a given
(agent, iteration) address, so parallel and sequential execution produce
identical results and tests can replay the randomness of a run.
"""

import numpy as np

# Purpose constants keep unrelated streams from colliding in spawn-key space.
STREAM_INIT = 0
STREAM_COORDS = 1
STREAM_NOISE = 2
STREAM_DATA = 3
STREAM_GRAPH = 4


def substream(master_seed, *path):
    """Return a ``numpy.random.Generator`` for the given stream address.

    Streams with different ``path`` tuples (or different master seeds) are
    statistically independent; the same address always yields a generator
    in the same initial state. This sits on the hot path (two calls per
    agent per iteration), hence the direct bit-generator construction.
    """
    seed = int(master_seed) if master_seed is not None else -1
    if seed < 0:
        raise ValueError(f"master seed must be a non-negative integer, got {master_seed!r}")
    key = tuple(map(int, path))
    for part in key:
        if part < 0:
            raise ValueError(f"stream address parts must be non-negative, got {key}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def data_seed(master_seed):
    """Derive a dataset-generation seed from a run master seed."""
    return int(substream(master_seed, STREAM_DATA).integers(0, 2**31 - 1))
