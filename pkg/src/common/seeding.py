"""
Counter-based random streams derived from one master seed.

Every random draw in the project comes from a generator returned by
``stream(seed, index)``. The Philox bit generator is keyed by the pair
(seed, index), so stream ``i`` is the same no matter which worker builds it
or in which order the streams are consumed. There is no global RNG state.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator number ``index`` of the master ``seed``."""
    if index < 0:
        raise ValueError("stream index must be non-negative")
    key = ((index & MASK64) << 64) | (seed & MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def chunk_bounds(n_items: int, chunk_size: int) -> list[tuple[int, int]]:
    """Split ``range(n_items)`` into consecutive [start, stop) chunks."""
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    return [(start, min(start + chunk_size, n_items)) for start in range(0, n_items, chunk_size)]
