"""Counter-based SplitMix64 streams.

Output ``i`` (zero-based) of the stream seeded with ``seed`` is
``mix(seed + (i + 1) * GOLDEN_GAMMA mod 2**64)``, where ``mix`` is the
SplitMix64 finalizer with the constants below. Uniform doubles take the top
53 bits: ``(z >> 11) * 2**-53``. Being counter-based, the stream vectorizes
and is easy to reproduce in any language.
"""

from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL_1 = 0xBF58476D1CE4E5B9
MIX_MUL_2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


def normalize_seed(seed: int) -> int:
    return int(seed) & MASK64


def splitmix64(seed: int, n: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset .. offset+n-1`` of the stream as ``uint64``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    counters = np.arange(offset + 1, offset + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(normalize_seed(seed)) + counters * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_MUL_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_MUL_2)
        return z ^ (z >> np.uint64(31))


def uniforms(seed: int, n: int) -> np.ndarray:
    """``n`` doubles in [0, 1) from the stream."""
    return (splitmix64(seed, n) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed: output ``index`` of the parent stream."""
    return int(splitmix64(seed, 1, offset=index)[0])
