"""Circle rotation induced by one parameter cycle, and its orbit statistics.

Each cycle rotates the coherent label's phase by ``-(omega T + area_beta)``,
i.e. by ``-2 pi Delta`` with ``Delta = (omega T + area_beta) / 2 pi``. Only
the fractional part ``delta = Delta - floor(Delta)`` matters for recurrence
statistics.

All orbit positions are computed in closed form per index from the exact
dyadic value of ``delta`` (see `exactfrac`), never by repeated subtraction,
so there is no error accumulation at any orbit length and window membership
is decided by exact integer comparisons.

Window convention: a "hit" at step k means ``{k delta} < epsilon`` -- the
one-sided fractional-part window that the return-time analysis in `gaps`
is built on. Approaches from the other side (``1 - {k delta} < epsilon``)
are tracked separately there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import _backend
from .errors import ValidationError
from .exactfrac import (below_threshold, convergents, dyadic_unit, frac_scaled,
                        to_fraction)

__all__ = [
    "RotationParams",
    "RotationClass",
    "rotation_params",
    "iterate",
    "orbit",
    "orbit_angles",
    "window_hits",
    "arc_fraction",
    "classify_rotation",
]

TWO_PI = 2.0 * math.pi

CLASSIFY_Q_MAX = 10 ** 6
CLASSIFY_TOL = 1e-12


def _check_epsilon(epsilon) -> Fraction:
    eps = to_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise ValidationError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    return eps


def _norm_angle(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod of a tiny negative can round back up to 2*pi
        t = 0.0
    return t


@dataclass(frozen=True)
class RotationParams:
    """Per-cycle rotation number and window description.

    ``rotation_number = (omega T + area_beta) / 2 pi``; ``int_part`` is its
    floor (for either sign) and ``frac_part`` the fractional remainder in
    [0, 1). ``theta0`` is the initial phase in [0, 2 pi); ``epsilon`` the
    window size in fractional-turn units.
    """

    rotation_number: float
    int_part: int
    frac_part: float
    theta0: float
    epsilon: float


def rotation_params(omega: float, cycle_period: float, area_beta: float,
                    theta0: float = 0.0, epsilon: float = 0.1) -> RotationParams:
    """Derive the rotation-map parameters from the physical inputs."""
    if not omega > 0:
        raise ValidationError("omega must be positive")
    if not cycle_period > 0:
        raise ValidationError("cycle_period must be positive")
    eps = _check_epsilon(epsilon)
    rot = (omega * cycle_period + area_beta) / TWO_PI
    ip = math.floor(rot)
    return RotationParams(rotation_number=rot,
                          int_part=ip,
                          frac_part=rot - ip,  # exact float operation
                          theta0=_norm_angle(theta0),
                          epsilon=float(eps))


def _delta_of(rotation_number: float) -> float:
    rot = float(rotation_number)
    if not math.isfinite(rot):
        raise ValidationError("rotation number must be finite")
    return rot - math.floor(rot)


def _theta_from_frac(theta0_norm: float, frac: float) -> float:
    t = theta0_norm - TWO_PI * frac
    if t < 0.0:
        t += TWO_PI
    return t


def iterate(theta0: float, rotation_number: float, k: int) -> float:
    """Orbit angle after k cycles: ``(theta0 - 2 pi k Delta) mod 2 pi``.

    Closed form per index: the fractional part of ``k * delta`` is reduced
    exactly (integer arithmetic on the dyadic value of ``delta``), so the
    result is accurate to rounding for any k, and depends on the rotation
    number only through its fractional part.
    """
    if k < 0:
        raise ValidationError("k must be non-negative")
    num, bits = dyadic_unit(_delta_of(rotation_number))
    t0 = _norm_angle(theta0)
    r = frac_scaled(int(k), num, bits)
    return _theta_from_frac(t0, r / (1 << bits))


def orbit(theta0: float, rotation_number: float) -> Iterator[float]:
    """Stream theta_1, theta_2, ... with the same per-index guarantee as `iterate`.

    The scaled fractional part is advanced by exact modular addition, which
    agrees bit for bit with the closed form at every index.
    """
    num, bits = dyadic_unit(_delta_of(rotation_number))
    t0 = _norm_angle(theta0)
    mask = (1 << bits) - 1
    r = 0
    while True:
        r = (r + num) & mask
        yield _theta_from_frac(t0, r / (1 << bits))


def orbit_angles(theta0: float, rotation_number: float, k_max: int) -> np.ndarray:
    """Vectorized orbit angles for k = 1..k_max (same values as `iterate`)."""
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    num, bits = dyadic_unit(_delta_of(rotation_number))
    t0 = _norm_angle(theta0)
    fracs = _backend.frac_series(num, bits, 1, int(k_max))
    theta = t0 - TWO_PI * fracs
    return np.where(theta < 0.0, theta + TWO_PI, theta)


def window_hits(delta: float, epsilon, k_max: int) -> np.ndarray:
    """All k in 1..k_max with ``{k delta} < epsilon`` (one-sided window).

    ``epsilon`` may be a float or a Fraction; the comparison is exact
    either way, and ``{k delta} == epsilon`` counts as a miss.
    """
    d = float(delta)
    if not 0.0 < d < 1.0:
        raise ValidationError(f"delta must lie strictly in (0, 1), got {delta}")
    eps = _check_epsilon(epsilon)
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    num, bits = dyadic_unit(d)
    thresh = below_threshold(eps, bits)
    hits = _backend.scan_hits(num, bits, thresh, 1, int(k_max))
    return hits.astype(np.int64)


def arc_fraction(theta0: float, rotation_number: float, arc_start: float,
                 arc_length: float, k_max: int) -> float:
    """Fraction of the first k_max orbit points landing in a fixed arc.

    The arc is ``[arc_start, arc_start + arc_length)`` on the circle
    (radians, wrapping allowed, 0 < arc_length <= 2 pi). For irrational
    rotation numbers this converges to ``arc_length / 2 pi``.
    """
    if not 0.0 < arc_length <= TWO_PI:
        raise ValidationError("arc_length must lie in (0, 2*pi]")
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    d = _delta_of(rotation_number)
    num, bits = dyadic_unit(d)
    den = 1 << bits
    # theta_k in [start, start+len)  <=>  {k delta} in (m - span, m] (mod 1)
    # with m = (theta0 - start)/2pi and span = len/2pi, all in turns
    x0 = to_fraction(_norm_angle(theta0)) / to_fraction(TWO_PI)
    start = to_fraction(_norm_angle(arc_start)) / to_fraction(TWO_PI)
    span = to_fraction(arc_length) / to_fraction(TWO_PI)
    m = (x0 - start) % 1
    a = m - span  # may be negative (wrapped interval)

    def count_open_left(lo: Fraction, hi: Fraction) -> int:
        # residues with lo < r/den <= hi
        lo_i = (lo.numerator * den) // lo.denominator + 1
        hi_i = min((hi.numerator * den) // hi.denominator, den - 1)
        return _backend.count_in_range(num, bits, lo_i, hi_i, 1, int(k_max))

    if a >= 0:
        count = count_open_left(a, m)
    else:
        count = count_open_left(a + 1, Fraction(1))
        count += count_open_left(Fraction(-1), m)  # [0, m]
    return count / float(k_max)


@dataclass(frozen=True)
class RotationClass:
    """Arithmetic type of a rotation number at a declared resolution.

    ``kind`` is "integer", "rational", or "irrational"; for the periodic
    kinds ``period`` is the orbit period (1, or the reduced denominator q)
    and ``p``/``q`` give the approximating fraction.
    """

    kind: str
    p: int | None = None
    q: int | None = None
    period: int | None = None


def classify_rotation(rotation_number: float, q_max: int = CLASSIFY_Q_MAX,
                      tol: float = CLASSIFY_TOL) -> RotationClass:
    """Detect integer/rational/irrational character up to (q_max, tol).

    Rational means some q <= q_max puts ``q * Delta`` within ``q * tol`` of
    an integer (equivalently, Delta within ``tol`` of p/q); the smallest
    such q is found by scanning continued-fraction convergents of the
    fractional part. Nothing is ever silently promoted to an exact
    rational: callers that know the exact value should say so themselves.
    """
    if q_max < 1:
        raise ValidationError("q_max must be >= 1")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    rot = float(rotation_number)
    nearest = round(rot)
    if abs(rot - nearest) <= tol:
        return RotationClass(kind="integer", p=int(nearest), q=1, period=1)
    x = to_fraction(rot)
    whole = math.floor(x)
    frac = x - whole
    tol_f = to_fraction(tol)
    num, den = frac.numerator, frac.denominator
    for p_c, q_c in convergents(frac):
        if q_c > q_max:
            break
        r = (q_c * num) % den
        dist = min(r, den - r)  # |q*Delta - round(q*Delta)| scaled by den
        if dist * tol_f.denominator <= q_c * tol_f.numerator * den:
            p_full = p_c + q_c * whole
            return RotationClass(kind="rational", p=int(p_full), q=int(q_c),
                                 period=int(q_c))
    return RotationClass(kind="irrational")
