"""Numpy implementation of the per-drop sampling kernels.

This is the reference backend; the compiled twin in `_kernels.pyx` must
reproduce it bitwise (same cipher, same uniform mapping, same inverse-CDF
normal transform, same accept/reject comparisons). Counter layout per draw
family: x0 = word, x1 = slot, x2 = cell, x3 = purpose, keyed per drop.
"""

from __future__ import annotations

import numpy as np

from .rng import DropStream, normal_pairs, philox4x32, uniform_pairs

BACKEND = "python"

# fixed word stride per redraw round of a shadowing vector; bounds the
# number of sites a single vector may cover (2 normals per word)
_ROUND_STRIDE = 32

_MAX_POSITION_ATTEMPTS = 10000
_MAX_SHADOW_ROUNDS = 1000000


def sample_hex_positions(key_lo: int, key_hi: int, purpose: int, cell: int,
                         count: int, half_width: float, circumradius: float,
                         inv_sqrt3: float, min_dist_sq: float,
                         center_x: float, center_y: float) -> np.ndarray:
    """Uniform points over a pointy-top hexagon, at least sqrt(min_dist_sq)
    from its center, by rejection from the bounding box.

    Attempt t of slot s reads counter word t, so accepted draws do not
    depend on how many other slots are being filled.
    """
    stream = DropStream(key_lo=key_lo, key_hi=key_hi, base_seed=0, drop_index=0)
    out = np.empty((count, 2), dtype=np.float64)
    pending = np.arange(count, dtype=np.uint64)
    for attempt in range(_MAX_POSITION_ATTEMPTS):
        if pending.size == 0:
            return out
        u = uniform_pairs(stream, purpose, cell, pending, np.uint64(attempt))
        x = (2.0 * u[..., 0] - 1.0) * half_width
        y = (2.0 * u[..., 1] - 1.0) * circumradius
        inside = np.abs(y) <= circumradius - np.abs(x) * inv_sqrt3
        clear = x * x + y * y >= min_dist_sq
        ok = inside & clear
        accepted = pending[ok].astype(np.int64)
        out[accepted, 0] = x[ok] + center_x
        out[accepted, 1] = y[ok] + center_y
        pending = pending[~ok]
    raise RuntimeError("hexagon rejection sampling did not terminate")


def sample_conditioned_shadows(key_lo: int, key_hi: int, purpose: int, cell: int,
                               distance_scores: np.ndarray, home: int,
                               sigma_db: float) -> np.ndarray:
    """Per-row standard-normal shadowing vectors conditioned on association.

    distance_scores[i, l] is the distance part of the dB-domain gain of row
    i's link to site l (a constant offset common to all sites may be
    dropped). Each row is redrawn until
    argmax_l (sigma_db * z[l] + distance_scores[i, l]) is strictly `home`,
    i.e. until the home site offers the highest large-scale gain. Returns
    the accepted z rows.
    """
    scores = np.asarray(distance_scores, dtype=np.float64)
    n_rows, n_sites = scores.shape
    n_words = (n_sites + 1) // 2
    if n_words > _ROUND_STRIDE:
        raise ValueError(f"at most {2 * _ROUND_STRIDE} sites per shadowing vector")
    stream = DropStream(key_lo=key_lo, key_hi=key_hi, base_seed=0, drop_index=0)
    words = np.arange(n_words, dtype=np.uint64)
    out = np.empty((n_rows, n_sites), dtype=np.float64)
    pending = np.arange(n_rows, dtype=np.int64)
    for round_index in range(_MAX_SHADOW_ROUNDS):
        if pending.size == 0:
            return out
        pairs = normal_pairs(stream, purpose, cell,
                             pending[:, None].astype(np.uint64),
                             np.uint64(round_index * _ROUND_STRIDE) + words[None, :])
        z = pairs.reshape(pending.size, 2 * n_words)[:, :n_sites]
        if n_sites == 1:
            # lone site: association holds vacuously, accept the first draw
            win = np.ones(pending.size, dtype=bool)
        else:
            total = sigma_db * z + scores[pending]
            home_score = total[:, home]
            others = np.delete(total, home, axis=1)
            win = home_score > others.max(axis=1)
        out[pending[win]] = z[win]
        pending = pending[~win]
    raise RuntimeError("association conditioning did not terminate")


def sample_plane_normals(key_lo: int, key_hi: int, purpose: int, cell: int,
                         n_slots: int, n_words: int) -> np.ndarray:
    """(n_slots, n_words) standard normals, one per counter word."""
    stream = DropStream(key_lo=key_lo, key_hi=key_hi, base_seed=0, drop_index=0)
    slots = np.arange(n_slots, dtype=np.uint64)[:, None]
    words = np.arange(n_words, dtype=np.uint64)[None, :]
    return normal_pairs(stream, purpose, cell, slots, words)[..., 0]


def philox4x32_block(x0, x1, x2, x3, key_lo, key_hi):
    """Expose the raw cipher for backend-parity tests."""
    return philox4x32(x0, x1, x2, x3, key_lo, key_hi)
