"""Exact rational interval arithmetic and a certified enclosure of exp.

Intervals are plain ``(lo, hi)`` pairs of Fractions with lo <= hi.  The
exponential enclosure uses a truncated Taylor series with an explicit
remainder bound: the argument is halved into [0, 1/2], the series is summed
exactly, and the result is squared back up with outward dyadic rounding at
each step so denominators stay bounded by the working precision.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .polys import UniPoly, as_rational

Interval = tuple[Fraction, Fraction]


def round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(x.numerator * scale // x.denominator, scale)


def round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-x.numerator) * scale // x.denominator), scale)


def iv_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def iv_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def iv_pow_positive(a: Interval, n: int) -> Interval:
    """a**n for an interval with a[0] >= 0."""
    if n == 0:
        return (Fraction(1), Fraction(1))
    return (a[0] ** n, a[1] ** n)


def iv_contains_zero(a: Interval) -> bool:
    return a[0] <= 0 <= a[1]


def poly_interval(p: UniPoly, box: Interval) -> Interval:
    """Interval Horner evaluation of p over box; exact bounds."""
    lo = hi = Fraction(0)
    for c in reversed(p.coeffs):
        lo, hi = iv_add(iv_mul((lo, hi), box), (c, c))
    return (lo, hi)


def exp_point_bounds(r, prec: int) -> Interval:
    """Certified bounds on e**r for rational r, width about 2**-prec."""
    r = as_rational(r)
    if r == 0:
        return (Fraction(1), Fraction(1))
    if r < 0:
        lo, hi = exp_point_bounds(-r, prec)
        return (round_down(1 / hi, prec), round_up(1 / lo, prec))
    # halve into (0, 1/2]
    halvings = 0
    s = r
    while s > Fraction(1, 2):
        s /= 2
        halvings += 1
    work = prec + 2 * halvings + 8
    # series with remainder <= 2 * s**(K+1) / (K+1)!
    target = Fraction(1, 1 << work)
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * s / k
        total += term
        bound = 2 * term * s / (k + 1)
        if bound <= target:
            break
    lo, hi = round_down(total, work), round_up(total + bound, work)
    for _ in range(halvings):
        lo, hi = round_down(lo * lo, work), round_up(hi * hi, work)
    return (lo, hi)


def exp_interval(box: Interval, prec: int) -> Interval:
    """Enclosure of exp over a rational interval (exp is monotone)."""
    if box[0] > box[1]:
        raise InputError("malformed interval")
    return (exp_point_bounds(box[0], prec)[0], exp_point_bounds(box[1], prec)[1])
