"""Return-time statistics of the one-sided window under the rotation map.

For an irrational rotation fraction ``delta`` and window ``{k delta} < eps``
(with ``eps < 1/2``) the times between successive window visits take at
most three values: ``k1``, ``k2`` and ``k1 + k2``, where ``k1`` is the
least index approaching 0 from above (``{k1 delta} < eps``) and ``k2`` the
least approaching from below (``1 - {k2 delta} < eps``). Their long-run
weights are

    F(k1) = (eps - {k1 d}) / eps
    F(k2) = (eps - 1 + {k2 d}) / eps
    F(k1+k2) = ({k1 d} + 1 - {k2 d} - eps) / eps

which sum to one, give mean return time 1/eps, and degenerate to two gaps
when ``eps = {k1 d} + 1 - {k2 d}`` exactly. Everything here is evaluated
in exact rational arithmetic (floats enter as exact dyadic values), so the
degenerate case is genuinely reachable and the bookkeeping identity
``k2 {k1 d} + k1 (1 - {k2 d}) = 1`` holds to rounding only when converting
out to floats.

`empirical_gaps` is the brute-force oracle: it scans the orbit, records
window entries, and tallies the gaps between them, discarding everything
before the first visit as transient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _backend
from .errors import (ContractViolation, NoHitsError, SearchBoundExceeded,
                     ValidationError)
from .exactfrac import (above_threshold, below_threshold, convergents,
                        dyadic_unit, first_returns_exact, frac_part,
                        to_fraction)
from .rotation import CLASSIFY_Q_MAX, CLASSIFY_TOL, classify_rotation

__all__ = [
    "GapDistribution",
    "RecurrenceRecord",
    "first_return_indices",
    "gap_distribution",
    "identity_residual",
    "mean_recurrence",
    "empirical_gaps",
]

# Hard ceiling on any first-return scan; beyond this the input is treated
# as effectively rational.
SEARCH_HARD_CAP = 200_000_000


def _delta_dyadic(delta) -> tuple[float, int, int]:
    d = float(delta)
    if not 0.0 < d < 1.0:
        raise ValidationError(f"delta must lie strictly in (0, 1), got {delta}")
    num, bits = dyadic_unit(d)
    return d, num, bits


def _check_epsilon(epsilon) -> Fraction:
    eps = to_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise ValidationError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    return eps


def _search_bound(num: int, bits: int, eps: Fraction) -> int:
    """Scan horizon for the first-return search.

    Ten mean return times plus the largest convergent denominator below
    1/eps, widened to the provable ceiling q_J + q_{J+1} where q_J is the
    first convergent denominator whose orbit point lands inside the
    window. The widening matters near rationals: close to p/q the approach
    from one side can take on the order of the *next* denominator.
    """
    den = 1 << bits
    inv_eps = -((-eps.denominator) // eps.numerator)  # ceil(1/eps)
    thresh = below_threshold(eps, bits)
    q_cap = 1
    q_hit = None
    q_next = None
    for _, q in convergents(Fraction(num, den)):
        if q_hit is not None:
            q_next = q
            break
        if q < inv_eps:
            q_cap = max(q_cap, q)
        r = (q * num) % den
        if min(r, den - r) <= thresh:
            q_hit = q
    provable = (q_hit or 1) + (q_next or q_hit or 1)
    return max(10 * inv_eps + q_cap, provable)


def first_return_indices(delta, epsilon, *, method: str = "scan",
                         search_bound: int | None = None) -> tuple[int, int]:
    """Least window-entry indices from either side: (k1, k2).

    ``k1`` is the least positive k with ``{k delta} < epsilon`` and ``k2``
    the least with ``1 - {k delta} < epsilon``; for ``epsilon < 1/2`` they
    are distinct.

    Parameters
    ----------
    method : {"scan", "cf"}
        "scan" walks the orbit directly up to the search bound (the
        default, and the reference semantics); "cf" uses the
        continued-fraction record walk, which returns identical indices in
        logarithmic time.

    Raises
    ------
    SearchBoundExceeded
        The scan bound was exhausted: ``delta`` is rational (or within
        rounding of one) with a period beyond the search horizon.
    """
    d, num, bits = _delta_dyadic(delta)
    eps = _check_epsilon(epsilon)
    if method == "cf":
        return first_returns_exact(num, 1 << bits, eps)
    if method != "scan":
        raise ValidationError(f"unknown method {method!r} (expected 'scan' or 'cf')")
    bound = _search_bound(num, bits, eps) if search_bound is None else int(search_bound)
    if bound > SEARCH_HARD_CAP:
        raise SearchBoundExceeded(
            f"first-return search bound {bound} exceeds the hard cap "
            f"{SEARCH_HARD_CAP}; delta = {d!r} is too close to a rational "
            "with a long period")
    ge_thresh = above_threshold(eps, bits)
    if ge_thresh >= (1 << bits):
        raise SearchBoundExceeded(
            f"window of size {float(eps)!r} is unreachable from below at the "
            f"resolution of delta = {d!r}")
    k1 = _backend.first_hit_le(num, bits, below_threshold(eps, bits), 1, bound)
    k2 = _backend.first_hit_ge(num, bits, ge_thresh, 1, bound)
    if not k1 or not k2:
        side = "below" if k2 else "above"
        raise SearchBoundExceeded(
            f"no window approach from {side} within {bound} steps; delta = "
            f"{d!r} behaves rationally at this resolution")
    return int(k1), int(k2)


@dataclass(frozen=True)
class GapDistribution:
    """Exact three-point distribution of window return times.

    ``probabilities`` aligns with ``gaps`` = (k1, k2, k1+k2); the weights
    sum to one and the mean return time is 1/epsilon (in units of the
    cycle period). ``frac_k1``/``frac_k2`` are the fractional parts
    {k1*delta} and {k2*delta} the weights are built from.
    """

    k1: int
    k2: int
    probabilities: tuple[float, float, float]
    epsilon: float
    delta: float
    frac_k1: float
    frac_k2: float

    @property
    def gaps(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k1 + self.k2)

    def by_gap(self) -> dict[int, float]:
        """Map gap -> probability, ascending by gap."""
        pairs = sorted(zip(self.gaps, self.probabilities))
        return dict(pairs)

    def support(self) -> tuple[int, ...]:
        """Gaps with nonzero probability, ascending."""
        return tuple(g for g, p in sorted(zip(self.gaps, self.probabilities))
                     if p > 0.0)


def gap_distribution(delta, epsilon, *, q_max: int = CLASSIFY_Q_MAX,
                     tol: float = CLASSIFY_TOL,
                     method: str = "scan") -> GapDistribution:
    """Analytic return-time distribution for an (effectively) irrational delta.

    Refuses a ``delta`` that `classify_rotation` flags as rational at
    (q_max, tol): periodic orbits have their own return pattern, which
    `empirical_gaps` measures directly.
    """
    d, num, bits = _delta_dyadic(delta)
    eps = _check_epsilon(epsilon)
    cls = classify_rotation(d, q_max=q_max, tol=tol)
    if cls.kind != "irrational":
        raise ValidationError(
            f"delta = {d!r} classifies as {cls.kind} (p/q = {cls.p}/{cls.q}); "
            "the analytic distribution assumes an irrational rotation -- "
            "use empirical_gaps for periodic orbits")
    k1, k2 = first_return_indices(d, eps, method=method)
    a = frac_part(k1, num, bits)       # {k1 delta}
    b = frac_part(k2, num, bits)       # {k2 delta}
    f1 = (eps - a) / eps
    f2 = (eps - (1 - b)) / eps
    f3 = (a + (1 - b) - eps) / eps
    if f3 < 0 or f1 <= 0 or f2 <= 0:
        raise ContractViolation(
            f"return-time weights out of range for delta={d!r}, "
            f"epsilon={float(eps)!r}: {(float(f1), float(f2), float(f3))}")
    return GapDistribution(
        k1=k1, k2=k2,
        probabilities=(float(f1), float(f2), float(f3)),
        epsilon=float(eps), delta=d,
        frac_k1=float(a), frac_k2=float(b))


def identity_residual(k1: int, k2: int, delta) -> float:
    """Residual of the bookkeeping identity ``k2 {k1 d} + k1 (1 - {k2 d}) - 1``.

    Evaluated in exact rational arithmetic and converted to float at the
    end; for genuine first-return pairs the exact value is 0, for anything
    else it is an integer multiple of 1 away (plus fractional-part terms).
    """
    if k1 < 1 or k2 < 1:
        raise ValidationError("k1 and k2 must be positive")
    x = to_fraction(delta)
    a = k1 * x - math.floor(k1 * x)
    b = k2 * x - math.floor(k2 * x)
    return float(k2 * a + k1 * (1 - b) - 1)


def mean_recurrence(dist: GapDistribution) -> float:
    """Mean return time sum(gap * probability); equals 1/epsilon."""
    return float(sum(g * p for g, p in zip(dist.gaps, dist.probabilities)))


@dataclass
class RecurrenceRecord:
    """Observed window visits of a scanned orbit.

    ``hit_indices`` holds the visit indices (empty when the scan streamed
    without storing them); ``gap_counts`` maps each observed gap between
    successive visits to its count; the ``transient_discarded`` steps
    before the first visit contribute to neither.
    """

    gap_counts: dict[int, int]
    transient_discarded: int
    iterations: int
    n_hits: int
    hit_indices: np.ndarray = field(
        default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def n_gaps(self) -> int:
        return sum(self.gap_counts.values())

    def gap_values(self) -> tuple[int, ...]:
        return tuple(sorted(self.gap_counts))

    def frequencies(self) -> dict[int, float]:
        """Empirical gap frequencies, ascending by gap."""
        total = self.n_gaps
        if total == 0:
            return {}
        return {g: self.gap_counts[g] / total for g in sorted(self.gap_counts)}

    def mean_gap(self) -> float:
        total = self.n_gaps
        if total == 0:
            raise ValidationError("no gaps recorded")
        return sum(g * c for g, c in self.gap_counts.items()) / total

    def gap_stderr(self) -> float:
        """Standard error of the mean gap (sample std over sqrt(count))."""
        total = self.n_gaps
        if total < 2:
            raise ValidationError("need at least two gaps for a standard error")
        m = self.mean_gap()
        var = sum(c * (g - m) ** 2 for g, c in self.gap_counts.items()) / (total - 1)
        return math.sqrt(var / total)


def empirical_gaps(delta, epsilon, iterations: int, *,
                   keep_hits: bool | None = None) -> RecurrenceRecord:
    """Scan the orbit for window visits and tally the gaps between them.

    Parameters
    ----------
    delta : float
        Rotation fraction in (0, 1); rational values are fine here (the
        visit pattern is then periodic).
    epsilon : float or Fraction
        Window size in (0, 1/2); the visit test ``{k delta} < epsilon`` is
        exact.
    iterations : int
        Number of cycles to scan (k = 1..iterations).
    keep_hits : bool, optional
        Store the visit indices on the record. Defaults to True up to 10^7
        iterations, False beyond (the streaming tally needs no storage).

    Raises
    ------
    NoHitsError
        The orbit never entered the window within the budget.
    """
    d, num, bits = _delta_dyadic(delta)
    eps = _check_epsilon(epsilon)
    if iterations < 1:
        raise ValidationError("iterations must be >= 1")
    if keep_hits is None:
        keep_hits = iterations <= 10 ** 7
    thresh = below_threshold(eps, bits)
    if keep_hits:
        hits = _backend.scan_hits(num, bits, thresh, 1, int(iterations))
        if hits.size == 0:
            raise NoHitsError(
                f"no window visits in {iterations} iterations "
                f"(delta={d!r}, epsilon={float(eps)!r})")
        hits = hits.astype(np.int64)
        diffs = np.diff(hits)
        vals, cnts = np.unique(diffs, return_counts=True)
        counts = {int(v): int(c) for v, c in zip(vals, cnts)}
        return RecurrenceRecord(gap_counts=counts,
                                transient_discarded=int(hits[0]) - 1,
                                iterations=int(iterations),
                                n_hits=int(hits.size),
                                hit_indices=hits)
    first, _last, n_hits, counts = _backend.gap_counts(
        num, bits, thresh, 1, int(iterations))
    if n_hits == 0:
        raise NoHitsError(
            f"no window visits in {iterations} iterations "
            f"(delta={d!r}, epsilon={float(eps)!r})")
    return RecurrenceRecord(gap_counts={int(g): int(c) for g, c in counts.items()},
                            transient_discarded=int(first) - 1,
                            iterations=int(iterations),
                            n_hits=int(n_hits))
