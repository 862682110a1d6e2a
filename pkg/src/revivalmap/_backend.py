"""Backend selection for the orbit-scan kernels.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``REVIVALMAP_PURE_PYTHON=1`` forces the NumPy
backend. Calls with ``frac_bits > 64`` (rotation fractions below 2**-12)
are routed to exact big-integer fallbacks regardless of backend.
"""

from __future__ import annotations

import os

from . import _kernels_py as _py

_fast = None
if not os.environ.get("REVIVALMAP_PURE_PYTHON"):
    try:
        from . import _kernels as _fast  # type: ignore[no-redef]
    except ImportError:
        _fast = None

_impl = _fast if _fast is not None else _py

BACKEND = _impl.BACKEND


def scan_hits(mult, frac_bits, le_thresh, k_start, k_stop):
    if frac_bits > 64:
        return _py.scan_hits_big(mult, frac_bits, le_thresh, k_start, k_stop)
    return _impl.scan_hits(mult, frac_bits, le_thresh, k_start, k_stop)


def first_hit_le(mult, frac_bits, le_thresh, k_start, k_stop):
    if frac_bits > 64:
        return _py.first_hit_le_big(mult, frac_bits, le_thresh, k_start, k_stop)
    return _impl.first_hit_le(mult, frac_bits, le_thresh, k_start, k_stop)


def first_hit_ge(mult, frac_bits, ge_thresh, k_start, k_stop):
    if frac_bits > 64:
        return _py.first_hit_ge_big(mult, frac_bits, ge_thresh, k_start, k_stop)
    return _impl.first_hit_ge(mult, frac_bits, ge_thresh, k_start, k_stop)


def gap_counts(mult, frac_bits, le_thresh, k_start, k_stop):
    if frac_bits > 64:
        return _py.gap_counts_big(mult, frac_bits, le_thresh, k_start, k_stop)
    return _impl.gap_counts(mult, frac_bits, le_thresh, k_start, k_stop)


def count_in_range(mult, frac_bits, lo_thresh, hi_thresh, k_start, k_stop):
    if frac_bits > 64:
        return _py.count_in_range_big(
            mult, frac_bits, lo_thresh, hi_thresh, k_start, k_stop)
    return _impl.count_in_range(
        mult, frac_bits, lo_thresh, hi_thresh, k_start, k_stop)


def frac_series(mult, frac_bits, k_start, k_stop):
    if frac_bits > 64:
        return _py.frac_series_big(mult, frac_bits, k_start, k_stop)
    return _impl.frac_series(mult, frac_bits, k_start, k_stop)
