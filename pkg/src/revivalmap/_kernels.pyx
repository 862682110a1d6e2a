# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit-scan kernels.

Same contract as ``_kernels_py``: residues r_k = (k * mult) mod 2**frac_bits
via uint64 wraparound arithmetic (exact for frac_bits <= 64), inclusive
integer thresholds. Outputs must match the NumPy backend bit for bit.
"""

from libc.stdint cimport uint64_t

import numpy as np

BACKEND = "cython"


cdef inline uint64_t _mask_bits(int frac_bits) nogil:
    if frac_bits >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFFULL
    return ((<uint64_t>1) << frac_bits) - 1


def scan_hits(mult, int frac_bits, le_thresh, k_start, k_stop):
    """Indices k in [k_start, k_stop] with r_k <= le_thresh, as uint64."""
    cdef uint64_t m = mult, t = le_thresh, k0 = k_start, k1 = k_stop
    cdef uint64_t mask = _mask_bits(frac_bits)
    cdef uint64_t k, n = 0
    if k1 < k0:
        return np.empty(0, dtype=np.uint64)
    with nogil:
        for k in range(k0, k1 + 1):
            if (k * m) & mask <= t:
                n += 1
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] view = out
    cdef uint64_t i = 0
    with nogil:
        for k in range(k0, k1 + 1):
            if (k * m) & mask <= t:
                view[i] = k
                i += 1
    return out


def first_hit_le(mult, int frac_bits, le_thresh, k_start, k_stop):
    """Least k in [k_start, k_stop] with r_k <= le_thresh, or 0 if none."""
    cdef uint64_t m = mult, t = le_thresh, k0 = k_start, k1 = k_stop
    cdef uint64_t mask = _mask_bits(frac_bits)
    cdef uint64_t k, found = 0
    with nogil:
        for k in range(k0, k1 + 1):
            if (k * m) & mask <= t:
                found = k
                break
    return int(found)


def first_hit_ge(mult, int frac_bits, ge_thresh, k_start, k_stop):
    """Least k in [k_start, k_stop] with r_k >= ge_thresh, or 0 if none."""
    cdef uint64_t m = mult, t = ge_thresh, k0 = k_start, k1 = k_stop
    cdef uint64_t mask = _mask_bits(frac_bits)
    cdef uint64_t k, found = 0
    with nogil:
        for k in range(k0, k1 + 1):
            if (k * m) & mask >= t:
                found = k
                break
    return int(found)


def gap_counts(mult, int frac_bits, le_thresh, k_start, k_stop):
    """Streaming hit statistics: (first_hit, last_hit, n_hits, {gap: count})."""
    cdef uint64_t m = mult, t = le_thresh, k0 = k_start, k1 = k_stop
    cdef uint64_t mask = _mask_bits(frac_bits)
    cdef uint64_t k, first_hit = 0, prev = 0, n_hits = 0, g
    # post-transient gaps take at most three distinct values; 64 slots is
    # pure defence
    cdef uint64_t vals[64]
    cdef uint64_t cnts[64]
    cdef int n_distinct = 0, j, slot
    overflow = {}
    for k in range(k0, k1 + 1):
        if (k * m) & mask <= t:
            n_hits += 1
            if first_hit == 0:
                first_hit = k
            else:
                g = k - prev
                slot = -1
                for j in range(n_distinct):
                    if vals[j] == g:
                        slot = j
                        break
                if slot >= 0:
                    cnts[slot] += 1
                elif n_distinct < 64:
                    vals[n_distinct] = g
                    cnts[n_distinct] = 1
                    n_distinct += 1
                else:
                    overflow[int(g)] = overflow.get(int(g), 0) + 1
            prev = k
    counts = {int(vals[j]): int(cnts[j]) for j in range(n_distinct)}
    for g_py, c_py in overflow.items():
        counts[g_py] = counts.get(g_py, 0) + c_py
    return int(first_hit), int(prev), int(n_hits), counts


def count_in_range(mult, int frac_bits, lo_thresh, hi_thresh, k_start, k_stop):
    """Number of k in [k_start, k_stop] with lo_thresh <= r_k <= hi_thresh."""
    if hi_thresh < lo_thresh:
        return 0
    cdef uint64_t m = mult, k0 = k_start, k1 = k_stop
    cdef uint64_t lo_t = max(lo_thresh, 0), hi_t = hi_thresh
    cdef uint64_t mask = _mask_bits(frac_bits)
    cdef uint64_t k, r, total = 0
    with nogil:
        for k in range(k0, k1 + 1):
            r = (k * m) & mask
            if lo_t <= r and r <= hi_t:
                total += 1
    return int(total)


def frac_series(mult, int frac_bits, k_start, k_stop):
    """Array of {k * mult / 2**frac_bits} as float64 for k in the range."""
    cdef uint64_t m = mult, k0 = k_start, k1 = k_stop
    cdef uint64_t mask = _mask_bits(frac_bits)
    cdef double scale = <double>(2.0 ** frac_bits)
    cdef uint64_t k
    if k1 < k0:
        return np.empty(0, dtype=np.float64)
    out = np.empty(k1 - k0 + 1, dtype=np.float64)
    cdef double[::1] view = out
    with nogil:
        for k in range(k0, k1 + 1):
            view[k - k0] = <double>((k * m) & mask) / scale
    return out
