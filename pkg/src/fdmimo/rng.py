"""Counter-based random streams for reproducible parallel simulation.

Every random quantity in a drop is addressed, not sequenced: a 128-bit
Philox4x32-10 block cipher maps (word, slot, cell, purpose) counters under a
per-drop key to raw bits, so any worker can regenerate any draw in isolation.
Consequences relied on elsewhere:

- campaigns are invariant under worker count and scheduling,
- enlarging a population (more uplink users, more antennas) leaves the draws
  of the existing population untouched, giving paired samples across
  scenario variants,
- the numpy fallback and the compiled kernels produce bitwise identical
  streams because both evaluate the same integer cipher and the same inverse
  normal CDF.

Uniforms are strictly inside (0, 1) (53-bit mantissa plus half-step offset),
so the inverse-CDF normal transform never sees 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

_PHILOX_M0 = np.uint64(0xD2511F53)
_PHILOX_M1 = np.uint64(0xCD9E8D57)

_MASK32 = np.uint64(0xFFFFFFFF)
_MASK64 = (1 << 64) - 1

_INV_2_53 = 2.0 ** -53

# purpose tags; one tag per independent family of draws within a drop
PURPOSE_POSITION_DOWNLINK = 0
PURPOSE_POSITION_UPLINK = 1
PURPOSE_SHADOWING = 2
PURPOSE_UE_UE_SHADOWING = 3


@dataclass(frozen=True)
class DropStream:
    """Keyed source of counter-addressed draws for one drop."""

    key_lo: int
    key_hi: int
    base_seed: int
    drop_index: int


def _mix64(z: int) -> int:
    """Finalizing 64-bit mixer (splitmix64); bijective, avalanching."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_for_drop(base_seed: int, drop_index: int) -> DropStream:
    """Derive the Philox key for one drop from (base_seed, drop_index)."""
    if drop_index < 0:
        raise ValueError("drop_index must be nonnegative")
    key = _mix64(_mix64(base_seed & _MASK64) ^ ((drop_index & _MASK64) * 0x9E3779B97F4A7C15 & _MASK64))
    return DropStream(key_lo=key & 0xFFFFFFFF, key_hi=(key >> 32) & 0xFFFFFFFF,
                      base_seed=base_seed, drop_index=drop_index)


def philox4x32(x0, x1, x2, x3, key_lo: int, key_hi: int):
    """10-round Philox4x32 block cipher, vectorized over counter arrays.

    Returns four uint32 arrays broadcast to the common counter shape.
    """
    x0 = np.asarray(x0, dtype=np.uint64)
    x1 = np.asarray(x1, dtype=np.uint64)
    x2 = np.asarray(x2, dtype=np.uint64)
    x3 = np.asarray(x3, dtype=np.uint64)
    x0, x1, x2, x3 = np.broadcast_arrays(x0, x1, x2, x3)
    k0 = int(key_lo) & 0xFFFFFFFF
    k1 = int(key_hi) & 0xFFFFFFFF
    for r in range(10):
        if r > 0:
            k0 = (k0 + 0x9E3779B9) & 0xFFFFFFFF
            k1 = (k1 + 0xBB67AE85) & 0xFFFFFFFF
        prod0 = x0 * _PHILOX_M0
        prod1 = x2 * _PHILOX_M1
        hi0, lo0 = prod0 >> np.uint64(32), prod0 & _MASK32
        hi1, lo1 = prod1 >> np.uint64(32), prod1 & _MASK32
        x0 = hi1 ^ x1 ^ np.uint64(k0)
        x1 = lo1
        x2 = hi0 ^ x3 ^ np.uint64(k1)
        x3 = lo0
    return (x0.astype(np.uint32), x1.astype(np.uint32),
            x2.astype(np.uint32), x3.astype(np.uint32))


def _doubles_from_words(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Two uint32 words -> one double strictly inside (0, 1)."""
    hi = (a >> np.uint32(5)).astype(np.float64)   # 27 bits
    lo = (b >> np.uint32(6)).astype(np.float64)   # 26 bits
    return (hi * 67108864.0 + lo + 0.5) * _INV_2_53


def uniform_pairs(stream: DropStream, purpose: int, cell: int,
                  slot, word) -> np.ndarray:
    """Two uniforms per (slot, word) block; shape broadcast(slot, word) + (2,)."""
    slot = np.asarray(slot, dtype=np.uint64)
    word = np.asarray(word, dtype=np.uint64)
    slot, word = np.broadcast_arrays(slot, word)
    y0, y1, y2, y3 = philox4x32(word, slot, np.uint64(cell), np.uint64(purpose),
                                stream.key_lo, stream.key_hi)
    out = np.empty(slot.shape + (2,), dtype=np.float64)
    out[..., 0] = _doubles_from_words(y0, y1)
    out[..., 1] = _doubles_from_words(y2, y3)
    return out


def normal_pairs(stream: DropStream, purpose: int, cell: int,
                 slot, word) -> np.ndarray:
    """Two standard normals per (slot, word) block via the inverse CDF."""
    return ndtri(uniform_pairs(stream, purpose, cell, slot, word))


def normal_rows(stream: DropStream, purpose: int, cell: int,
                slots: np.ndarray, n_per_row: int) -> np.ndarray:
    """(len(slots), n_per_row) standard normals, two per counter block.

    Row i is addressed solely by slots[i], so rows are independent of how
    many other rows are requested; column j comes from block word j // 2.
    """
    n_words = (n_per_row + 1) // 2
    slots = np.asarray(slots, dtype=np.uint64)
    pairs = normal_pairs(stream, purpose, cell,
                         slots[:, None], np.arange(n_words, dtype=np.uint64)[None, :])
    return pairs.reshape(len(slots), 2 * n_words)[:, :n_per_row]
