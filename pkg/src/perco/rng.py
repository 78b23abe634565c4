"""Deterministic randomness: keyed substreams and pair-indexed uniforms.

Two mechanisms, both derived from a single 64-bit master seed:

* ``substream(seed, *path)`` gives a counter-based generator (Philox) keyed by
  the master seed and an integer path such as (replicate, purpose).  Replicates
  are therefore independent of execution order and thread schedule.
* ``pair_uniforms(seed, i, j)`` maps an unordered index pair to a uniform in
  (0, 1) through a splitmix-style hash chain.  The value depends only on
  (seed, min(i,j), max(i,j)), which is what makes thinning couplings exact:
  a retained pair sees the same uniform in both graphs.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _finalize(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer: full avalanche of a uint64 word."""
    with np.errstate(over="ignore"):
        x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
        x = x ^ (x >> np.uint64(31))
    return x


def _absorb(state: np.ndarray, word) -> np.ndarray:
    with np.errstate(over="ignore"):
        return _finalize((state + np.uint64(_GOLDEN)) ^ np.asarray(word, dtype=np.uint64))


def _as_words(part) -> list[int]:
    """Encode one path element (int or short str tag) as 64-bit words."""
    if isinstance(part, str):
        raw = part.encode("utf-8")
        words = [len(raw)]
        for k in range(0, len(raw), 8):
            words.append(int.from_bytes(raw[k : k + 8], "little"))
        return words
    return [int(part) & 0xFFFFFFFFFFFFFFFF]


def mix(seed: int, *path) -> int:
    """Collapse (seed, path...) into one well-mixed 64-bit key.

    Path elements are integers or short string tags naming the purpose.
    """
    state = _finalize(np.asarray(int(seed) & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))
    for part in path:
        for word in _as_words(part):
            state = _absorb(state, word)
    return int(state)


def substream(seed: int, *path) -> np.random.Generator:
    """Counter-based generator keyed by (seed, path...)."""
    return np.random.Generator(np.random.Philox(key=mix(seed, *path)))


def pair_uniforms(seed: int, i, j) -> np.ndarray:
    """Uniform(0,1) variates indexed by unordered pairs of point ids.

    ``i`` and ``j`` may be arrays; the result is elementwise and symmetric
    under swapping i and j.
    """
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    state = np.asarray(mix(seed), dtype=np.uint64)
    state = _absorb(state, lo)
    state = _absorb(state, hi)
    # 53-bit mantissa, offset half a ulp so the value is strictly inside (0,1)
    return ((state >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def point_uniforms(seed: int, ids) -> np.ndarray:
    """Uniform(0,1) variates indexed by single point ids (used for thinning)."""
    ids = np.asarray(ids, dtype=np.uint64)
    state = np.asarray(mix(seed), dtype=np.uint64)
    state = _absorb(state, ids)
    return ((state >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
