# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the numpy sampling kernels in `_kernels_py`.

Same cipher, same uniform mapping, same inverse normal CDF (the scipy C
routine both backends share), same accept/reject comparison order, so the
two backends produce bitwise identical draws. Counters are 32-bit words:
x0 = word, x1 = slot, x2 = cell, x3 = purpose.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs
from libc.stdint cimport uint32_t, uint64_t
from scipy.special.cython_special cimport ndtri

cnp.import_array()

BACKEND = "compiled"

DEF ROUND_STRIDE = 32
DEF MAX_POSITION_ATTEMPTS = 10000
DEF MAX_SHADOW_ROUNDS = 1000000

cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline void _philox(uint32_t* x, uint32_t key_lo, uint32_t key_hi) nogil:
    """10-round Philox4x32 applied in place to the four counter words."""
    cdef uint32_t k0 = key_lo
    cdef uint32_t k1 = key_hi
    cdef uint64_t p0, p1
    cdef uint32_t y0, y1, y2, y3
    cdef int r
    for r in range(10):
        if r > 0:
            k0 += 0x9E3779B9u
            k1 += 0xBB67AE85u
        p0 = (<uint64_t> x[0]) * (<uint64_t> 0xD2511F53u)
        p1 = (<uint64_t> x[2]) * (<uint64_t> 0xCD9E8D57u)
        y0 = (<uint32_t> (p1 >> 32)) ^ x[1] ^ k0
        y1 = <uint32_t> p1
        y2 = (<uint32_t> (p0 >> 32)) ^ x[3] ^ k1
        y3 = <uint32_t> p0
        x[0] = y0
        x[1] = y1
        x[2] = y2
        x[3] = y3


cdef inline double _u01(uint32_t a, uint32_t b) nogil:
    """Two output words -> one double strictly inside (0, 1)."""
    return ((<double> (a >> 5)) * 67108864.0 + (<double> (b >> 6)) + 0.5) * _INV_2_53


cdef inline void _block(uint32_t word, uint32_t slot, uint32_t cell,
                        uint32_t purpose, uint32_t key_lo, uint32_t key_hi,
                        double* u0, double* u1) nogil:
    cdef uint32_t x[4]
    x[0] = word
    x[1] = slot
    x[2] = cell
    x[3] = purpose
    _philox(x, key_lo, key_hi)
    u0[0] = _u01(x[0], x[1])
    u1[0] = _u01(x[2], x[3])


def sample_hex_positions(key_lo, key_hi, purpose, cell,
                         count, half_width, circumradius,
                         inv_sqrt3, min_dist_sq, center_x, center_y):
    """Uniform points over a pointy-top hexagon, at least sqrt(min_dist_sq)
    from its center, by rejection from the bounding box.

    Attempt t of slot s reads counter word t, so accepted draws do not
    depend on how many other slots are being filled.
    """
    cdef uint32_t klo = <uint32_t> (<uint64_t> key_lo)
    cdef uint32_t khi = <uint32_t> (<uint64_t> key_hi)
    cdef uint32_t cpurpose = <uint32_t> purpose
    cdef uint32_t ccell = <uint32_t> cell
    cdef Py_ssize_t n = count
    cdef double hw = half_width
    cdef double radius = circumradius
    cdef double slope = inv_sqrt3
    cdef double mds = min_dist_sq
    cdef double cx = center_x
    cdef double cy = center_y
    out = np.empty((n, 2), dtype=np.float64)
    cdef double[:, ::1] pos = out
    cdef Py_ssize_t s
    cdef int attempt, done
    cdef double u0, u1, x, y
    with nogil:
        for s in range(n):
            done = 0
            for attempt in range(MAX_POSITION_ATTEMPTS):
                _block(<uint32_t> attempt, <uint32_t> s, ccell, cpurpose,
                       klo, khi, &u0, &u1)
                x = (2.0 * u0 - 1.0) * hw
                y = (2.0 * u1 - 1.0) * radius
                if fabs(y) <= radius - fabs(x) * slope and x * x + y * y >= mds:
                    pos[s, 0] = x + cx
                    pos[s, 1] = y + cy
                    done = 1
                    break
            if not done:
                with gil:
                    raise RuntimeError("hexagon rejection sampling did not terminate")
    return out


def sample_conditioned_shadows(key_lo, key_hi, purpose, cell,
                               distance_scores, home, sigma_db):
    """Per-row standard-normal shadowing vectors conditioned on association.

    Each row is redrawn until argmax_l (sigma_db * z[l] + distance_scores[i, l])
    is strictly `home`; see the numpy twin for the full contract.
    """
    scores_arr = np.ascontiguousarray(distance_scores, dtype=np.float64)
    if scores_arr.ndim != 2:
        raise ValueError("distance_scores must be 2-d")
    cdef Py_ssize_t n_rows = scores_arr.shape[0]
    cdef Py_ssize_t n_sites = scores_arr.shape[1]
    cdef Py_ssize_t n_words = (n_sites + 1) // 2
    if n_words > ROUND_STRIDE:
        raise ValueError(f"at most {2 * ROUND_STRIDE} sites per shadowing vector")
    cdef uint32_t klo = <uint32_t> (<uint64_t> key_lo)
    cdef uint32_t khi = <uint32_t> (<uint64_t> key_hi)
    cdef uint32_t cpurpose = <uint32_t> purpose
    cdef uint32_t ccell = <uint32_t> cell
    cdef Py_ssize_t chome = home
    cdef double sigma = sigma_db
    cdef double[:, ::1] scores = scores_arr
    out = np.empty((n_rows, n_sites), dtype=np.float64)
    cdef double[:, ::1] zrows = out
    cdef double zbuf[2 * ROUND_STRIDE]
    cdef Py_ssize_t i, w, l
    cdef int round_index, done
    cdef double u0, u1, home_score, best
    with nogil:
        for i in range(n_rows):
            done = 0
            for round_index in range(MAX_SHADOW_ROUNDS):
                for w in range(n_words):
                    _block(<uint32_t> (round_index * ROUND_STRIDE + w),
                           <uint32_t> i, ccell, cpurpose, klo, khi, &u0, &u1)
                    zbuf[2 * w] = ndtri(u0)
                    zbuf[2 * w + 1] = ndtri(u1)
                if n_sites == 1:
                    done = 1
                else:
                    home_score = sigma * zbuf[chome] + scores[i, chome]
                    best = -1e300
                    for l in range(n_sites):
                        if l == chome:
                            continue
                        if sigma * zbuf[l] + scores[i, l] > best:
                            best = sigma * zbuf[l] + scores[i, l]
                    if home_score > best:
                        done = 1
                if done:
                    for l in range(n_sites):
                        zrows[i, l] = zbuf[l]
                    break
            if not done:
                with gil:
                    raise RuntimeError("association conditioning did not terminate")
    return out


def sample_plane_normals(key_lo, key_hi, purpose, cell, n_slots, n_words):
    """(n_slots, n_words) standard normals, one per counter word."""
    cdef uint32_t klo = <uint32_t> (<uint64_t> key_lo)
    cdef uint32_t khi = <uint32_t> (<uint64_t> key_hi)
    cdef uint32_t cpurpose = <uint32_t> purpose
    cdef uint32_t ccell = <uint32_t> cell
    cdef Py_ssize_t rows = n_slots
    cdef Py_ssize_t cols = n_words
    out = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] z = out
    cdef Py_ssize_t s, w
    cdef double u0, u1
    with nogil:
        for s in range(rows):
            for w in range(cols):
                _block(<uint32_t> w, <uint32_t> s, ccell, cpurpose,
                       klo, khi, &u0, &u1)
                z[s, w] = ndtri(u0)
    return out


def philox4x32_block(x0, x1, x2, x3, key_lo, key_hi):
    """Expose the raw cipher for backend-parity tests (32-bit counters)."""
    a0 = np.asarray(x0, dtype=np.uint32)
    a1 = np.asarray(x1, dtype=np.uint32)
    a2 = np.asarray(x2, dtype=np.uint32)
    a3 = np.asarray(x3, dtype=np.uint32)
    a0, a1, a2, a3 = np.broadcast_arrays(a0, a1, a2, a3)
    shape = a0.shape
    f0 = np.ascontiguousarray(a0).ravel()
    f1 = np.ascontiguousarray(a1).ravel()
    f2 = np.ascontiguousarray(a2).ravel()
    f3 = np.ascontiguousarray(a3).ravel()
    cdef uint32_t[::1] v0 = f0
    cdef uint32_t[::1] v1 = f1
    cdef uint32_t[::1] v2 = f2
    cdef uint32_t[::1] v3 = f3
    cdef uint32_t klo = <uint32_t> (<uint64_t> key_lo)
    cdef uint32_t khi = <uint32_t> (<uint64_t> key_hi)
    o0 = np.empty(f0.shape[0], dtype=np.uint32)
    o1 = np.empty(f0.shape[0], dtype=np.uint32)
    o2 = np.empty(f0.shape[0], dtype=np.uint32)
    o3 = np.empty(f0.shape[0], dtype=np.uint32)
    cdef uint32_t[::1] w0 = o0
    cdef uint32_t[::1] w1 = o1
    cdef uint32_t[::1] w2 = o2
    cdef uint32_t[::1] w3 = o3
    cdef Py_ssize_t i
    cdef uint32_t x[4]
    with nogil:
        for i in range(v0.shape[0]):
            x[0] = v0[i]
            x[1] = v1[i]
            x[2] = v2[i]
            x[3] = v3[i]
            _philox(x, klo, khi)
            w0[i] = x[0]
            w1[i] = x[1]
            w2[i] = x[2]
            w3[i] = x[3]
    return (o0.reshape(shape), o1.reshape(shape),
            o2.reshape(shape), o3.reshape(shape))
