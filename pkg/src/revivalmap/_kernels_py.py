"""NumPy orbit-scan kernels (fallback backend).

Residues ``r_k = (k * mult) mod 2**frac_bits`` are produced with uint64
wraparound multiplication, which is exact whenever ``frac_bits <= 64``;
all predicates are inclusive integer comparisons precomputed by the
caller (see `exactfrac`). The compiled backend in ``_kernels.pyx``
implements the same contract; results must be identical bit for bit.

The ``*_big`` variants take arbitrary-precision Python integers and cover
the rare ``frac_bits > 64`` case (rotation fractions below 2**-12).
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"

_CHUNK = 1 << 20
_U64 = np.uint64


def _mask(frac_bits: int) -> np.uint64:
    if frac_bits >= 64:
        return _U64(0xFFFFFFFFFFFFFFFF)
    return _U64((1 << frac_bits) - 1)


def _chunk_ranges(k_start: int, k_stop: int):
    k = k_start
    while k <= k_stop:
        hi = min(k + _CHUNK - 1, k_stop)
        yield k, hi
        k = hi + 1


def _residues(mult: int, frac_bits: int, lo: int, hi: int) -> np.ndarray:
    ks = np.arange(lo, hi + 1, dtype=_U64)
    return (ks * _U64(mult)) & _mask(frac_bits)


def scan_hits(mult, frac_bits, le_thresh, k_start, k_stop):
    """Indices k in [k_start, k_stop] with r_k <= le_thresh, as uint64."""
    out = []
    t = _U64(le_thresh)
    for lo, hi in _chunk_ranges(k_start, k_stop):
        r = _residues(mult, frac_bits, lo, hi)
        idx = np.nonzero(r <= t)[0]
        if idx.size:
            out.append(idx.astype(_U64) + _U64(lo))
    if not out:
        return np.empty(0, dtype=_U64)
    return np.concatenate(out)


def first_hit_le(mult, frac_bits, le_thresh, k_start, k_stop):
    """Least k in [k_start, k_stop] with r_k <= le_thresh, or 0 if none."""
    t = _U64(le_thresh)
    for lo, hi in _chunk_ranges(k_start, k_stop):
        r = _residues(mult, frac_bits, lo, hi)
        idx = np.nonzero(r <= t)[0]
        if idx.size:
            return lo + int(idx[0])
    return 0


def first_hit_ge(mult, frac_bits, ge_thresh, k_start, k_stop):
    """Least k in [k_start, k_stop] with r_k >= ge_thresh, or 0 if none."""
    t = _U64(ge_thresh)
    for lo, hi in _chunk_ranges(k_start, k_stop):
        r = _residues(mult, frac_bits, lo, hi)
        idx = np.nonzero(r >= t)[0]
        if idx.size:
            return lo + int(idx[0])
    return 0


def gap_counts(mult, frac_bits, le_thresh, k_start, k_stop):
    """Streaming hit statistics: (first_hit, last_hit, n_hits, {gap: count}).

    Gaps are differences of successive hit indices; nothing before the
    first hit contributes. first_hit is 0 when there are no hits.
    """
    t = _U64(le_thresh)
    first_hit = 0
    prev = None
    n_hits = 0
    counts: dict[int, int] = {}
    for lo, hi in _chunk_ranges(k_start, k_stop):
        r = _residues(mult, frac_bits, lo, hi)
        idx = np.nonzero(r <= t)[0]
        if not idx.size:
            continue
        ks = idx.astype(np.int64) + lo
        n_hits += ks.size
        if prev is None:
            first_hit = int(ks[0])
            diffs = np.diff(ks)
        else:
            diffs = np.diff(np.concatenate(([prev], ks)))
        prev = int(ks[-1])
        if diffs.size:
            vals, cnts = np.unique(diffs, return_counts=True)
            for v, c in zip(vals.tolist(), cnts.tolist()):
                counts[v] = counts.get(v, 0) + c
    return first_hit, (prev or 0), n_hits, counts


def count_in_range(mult, frac_bits, lo_thresh, hi_thresh, k_start, k_stop):
    """Number of k in [k_start, k_stop] with lo_thresh <= r_k <= hi_thresh."""
    if hi_thresh < lo_thresh:
        return 0
    lo_t, hi_t = _U64(max(lo_thresh, 0)), _U64(hi_thresh)
    total = 0
    for lo, hi in _chunk_ranges(k_start, k_stop):
        r = _residues(mult, frac_bits, lo, hi)
        total += int(np.count_nonzero((r >= lo_t) & (r <= hi_t)))
    return total


def frac_series(mult, frac_bits, k_start, k_stop):
    """Array of {k * mult / 2**frac_bits} as float64 for k in the range."""
    scale = float(2.0 ** frac_bits)
    parts = []
    for lo, hi in _chunk_ranges(k_start, k_stop):
        r = _residues(mult, frac_bits, lo, hi)
        parts.append(r.astype(np.float64) / scale)
    if not parts:
        return np.empty(0, dtype=np.float64)
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# Arbitrary-precision variants (frac_bits > 64); plain loops, exactness over
# speed. Same contracts as above.

def scan_hits_big(mult, frac_bits, le_thresh, k_start, k_stop):
    mask = (1 << frac_bits) - 1
    hits = [k for k in range(k_start, k_stop + 1) if (k * mult) & mask <= le_thresh]
    return np.asarray(hits, dtype=_U64) if hits else np.empty(0, dtype=_U64)


def first_hit_le_big(mult, frac_bits, le_thresh, k_start, k_stop):
    mask = (1 << frac_bits) - 1
    for k in range(k_start, k_stop + 1):
        if (k * mult) & mask <= le_thresh:
            return k
    return 0


def first_hit_ge_big(mult, frac_bits, ge_thresh, k_start, k_stop):
    mask = (1 << frac_bits) - 1
    for k in range(k_start, k_stop + 1):
        if (k * mult) & mask >= ge_thresh:
            return k
    return 0


def gap_counts_big(mult, frac_bits, le_thresh, k_start, k_stop):
    mask = (1 << frac_bits) - 1
    first_hit = prev = 0
    n_hits = 0
    counts: dict[int, int] = {}
    for k in range(k_start, k_stop + 1):
        if (k * mult) & mask <= le_thresh:
            n_hits += 1
            if not first_hit:
                first_hit = k
            else:
                g = k - prev
                counts[g] = counts.get(g, 0) + 1
            prev = k
    return first_hit, prev, n_hits, counts


def count_in_range_big(mult, frac_bits, lo_thresh, hi_thresh, k_start, k_stop):
    if hi_thresh < lo_thresh:
        return 0
    mask = (1 << frac_bits) - 1
    lo_t = max(lo_thresh, 0)
    return sum(1 for k in range(k_start, k_stop + 1)
               if lo_t <= (k * mult) & mask <= hi_thresh)


def frac_series_big(mult, frac_bits, k_start, k_stop):
    den = 1 << frac_bits
    mask = den - 1
    return np.asarray([((k * mult) & mask) / den
                       for k in range(k_start, k_stop + 1)], dtype=np.float64)
