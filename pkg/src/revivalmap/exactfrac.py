"""Exact fractional-part arithmetic for circle-rotation orbits.

Every finite binary float is an exact dyadic rational, so mapping inputs
through :meth:`float.as_integer_ratio` lets all orbit arithmetic happen on
integers: the scaled residue of ``{k * x}`` is ``(k * num) mod 2**bits``,
with no error accumulation at any ``k`` and deterministic resolution of
boundary cases such as ``{k x} == eps`` (a strict miss).

Window predicates reduce to inclusive integer thresholds computed once per
query, which is what the scan kernels consume.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import SearchBoundExceeded, ValidationError

__all__ = [
    "to_fraction",
    "dyadic_unit",
    "frac_scaled",
    "frac_part",
    "below_threshold",
    "above_threshold",
    "convergents",
    "first_returns_exact",
]


def to_fraction(x) -> Fraction:
    """Exact rational value of ``x`` (int, Fraction, or finite float)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    xf = float(x)
    if not math.isfinite(xf):
        raise ValidationError(f"expected a finite number, got {x!r}")
    return Fraction(xf)


def dyadic_unit(x: float) -> tuple[int, int]:
    """Decompose ``x`` in ``[0, 1)`` as ``num / 2**bits``, exactly.

    Returns
    -------
    (num, bits) : tuple of int
        ``x == num / 2**bits`` with ``0 <= num < 2**bits`` (``bits == 0``
        only for ``x == 0``).
    """
    xf = float(x)
    if not (0.0 <= xf < 1.0) or not math.isfinite(xf):
        raise ValidationError(f"value {x!r} is not in [0, 1)")
    num, den = xf.as_integer_ratio()
    # binary floats always have a power-of-two denominator
    return num, den.bit_length() - 1


def frac_scaled(k: int, num: int, bits: int) -> int:
    """Scaled fractional part: ``{k * num / 2**bits} * 2**bits`` as an int."""
    return (k * num) & ((1 << bits) - 1)


def frac_part(k: int, num: int, bits: int) -> Fraction:
    """Exact ``{k * num / 2**bits}`` as a Fraction."""
    return Fraction(frac_scaled(k, num, bits), 1 << bits)


def below_threshold(eps: Fraction, bits: int) -> int:
    """Largest scaled residue with ``r / 2**bits < eps``.

    The predicate ``{k x} < eps`` becomes ``r <= below_threshold(...)``.
    """
    return ((eps.numerator << bits) - 1) // eps.denominator


def above_threshold(eps: Fraction, bits: int) -> int:
    """Smallest scaled residue with ``r / 2**bits > 1 - eps``.

    The predicate ``1 - {k x} < eps`` becomes ``r >= above_threshold(...)``.
    """
    gap = (eps.denominator - eps.numerator) << bits
    return gap // eps.denominator + 1


def convergents(x: Fraction) -> Iterator[tuple[int, int]]:
    """Yield continued-fraction convergents ``(p, q)`` of ``x``.

    The final convergent equals ``x`` exactly (terminating expansion of a
    rational input).
    """
    num, den = x.numerator, x.denominator
    a = num // den
    num, den = den, num - a * den
    p_prev, p = 1, a
    q_prev, q = 0, 1
    yield p, q
    while den:
        a = num // den
        num, den = den, num - a * den
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def first_returns_exact(num: int, den: int, eps: Fraction) -> tuple[int, int]:
    """Least indices entering the window from either side, in exact arithmetic.

    For the rotation fraction ``num/den`` (in lowest terms, in ``(0, 1)``)
    returns ``(k_below, k_above)`` where ``k_below`` is the least positive
    integer with ``{k num/den} < eps`` and ``k_above`` the least with
    ``1 - {k num/den} < eps``.

    Walks the one-sided best-approximation records (Stern-Brocot style
    subtraction with quotient jumps), so the cost is logarithmic in ``den``
    rather than linear in the answer. Raises `SearchBoundExceeded` when the
    orbit is periodic and one side of the window is never reached.
    """
    if not 0 < num < den:
        raise ValidationError("rotation fraction must lie strictly in (0, 1)")
    if math.gcd(num, den) != 1:
        g = math.gcd(num, den)
        num //= g
        den //= g
    thresh = (eps.numerator * den - 1) // eps.denominator
    if thresh < 0:
        raise ValidationError("window is below the resolution of the fraction")

    # (ka, va): record approach to 0 from above, value {ka*x} scaled by den
    # (kb, vb): record approach from below, deficit (1 - {kb*x}) scaled by den
    ka, va = 1, num
    kb, vb = 1, den - num
    k_below = 1 if va <= thresh else None
    k_above = 1 if vb <= thresh else None

    max_steps = 4 * den.bit_length() + 64
    for _ in range(max_steps):
        if k_below is not None and k_above is not None:
            return k_below, k_above
        if va == 0:
            # exact period reached; the deficit can never shrink further
            raise SearchBoundExceeded(
                "rotation fraction is rational with period "
                f"{ka}; the window is never approached from below")
        if va >= vb:
            steps = va // vb  # may land exactly on zero
            if k_below is None:
                need = -((thresh - va) // vb)  # ceil((va - thresh) / vb)
                if need <= steps:
                    k_below = ka + need * kb
            ka, va = ka + steps * kb, va - steps * vb
        else:
            steps = (vb - 1) // va  # deficit stays positive
            if k_above is None:
                need = -((thresh - vb) // va)
                if need <= steps:
                    k_above = kb + need * ka
            kb, vb = kb + steps * ka, vb - steps * va
    raise SearchBoundExceeded(
        "record walk failed to terminate; malformed rotation fraction")
