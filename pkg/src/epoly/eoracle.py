"""Exact sign determination for exponential polynomials.

An exponential polynomial is f(x) = F(x, e^(h(x))) with F in Z[X, Y] and h a
nonconstant integer polynomial.  Its sign at a real algebraic number alpha is
decidable without any oracle:

* whether the value is exactly zero is settled first, symbolically.  If
  h(alpha) = 0 the value is F(alpha, 1), an algebraic number.  Otherwise
  e^(h(alpha)) is transcendental (Lindemann-Weierstrass, h(alpha) being a
  nonzero algebraic number), so the value vanishes iff every Y-coefficient
  of F vanishes at alpha; if exactly one survives, its sign decides.
* only provably nonzero values reach the numeric phase, so adaptive interval
  refinement (of alpha and of the exp enclosure) always terminates.

Refinement escalation doubles the working precision per round and is capped;
hitting the cap raises rather than ever returning an unsound sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import AlgebraicNumber, Infinity, Point, as_point, sign_at
from .errors import InputError, PrecisionLimitError
from .intervals import (
    exp_interval,
    iv_add,
    iv_contains_zero,
    iv_mul,
    iv_pow_positive,
    poly_interval,
)
from .pfaffian import PfaffianSpec, lateral_sign
from .polys import BiPoly, UniPoly, sign

DEFAULT_MAX_PRECISION_BITS = 4096


@dataclass(frozen=True)
class EPolynomial:
    """f(x) = F(x, e^(h(x))); h must be a nonconstant integer polynomial."""

    F: BiPoly
    h: UniPoly

    def __post_init__(self):
        if self.F.is_zero:
            raise InputError("zero polynomial does not define a function")
        if self.h.degree < 1:
            raise InputError(
                "constant h makes e^(h(x)) a constant with no exact rational "
                "value; only nonconstant integer h is supported"
            )
        if any(c.denominator != 1 for c in self.h.coeffs):
            raise InputError("h must have integer coefficients")

    @property
    def spec(self) -> PfaffianSpec:
        """Differential rule of e^(h(x)): phi' = h'(x) * phi."""
        return PfaffianSpec(BiPoly.of([UniPoly.ZERO, self.h.derivative()]))

    def oracle(self, max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> "ExpSignOracle":
        return ExpSignOracle(self.h, max_precision_bits)


def esign_at(
    P: BiPoly,
    h: UniPoly,
    alpha: "AlgebraicNumber | Fraction | int",
    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS,
) -> int:
    """Exact sign of P(alpha, e^(h(alpha))).

    Pure: the input number is cloned before any interval refinement.
    """
    point = as_point(alpha)
    if isinstance(point, Infinity):
        raise InputError("use esign_at_infinity for infinite points")
    return _esign_at_working(P, h, point.clone(), max_precision_bits)


def _esign_at_working(P: BiPoly, h: UniPoly, alpha: AlgebraicNumber, max_bits: int) -> int:
    if P.is_zero:
        return 0
    if sign_at(h, alpha) == 0:
        return sign_at(P.eval_y(1), alpha)
    live = [(j, P.row(j)) for j in range(P.deg_y + 1) if sign_at(P.row(j), alpha) != 0]
    if not live:
        return 0
    if len(live) == 1:
        return sign_at(live[0][1], alpha)
    prec = 64
    while prec <= max_bits:
        box = (alpha.lo, alpha.hi)
        ebox = exp_interval(poly_interval(h, box), prec)
        total = (Fraction(0), Fraction(0))
        for j, row in live:
            total = iv_add(total, iv_mul(poly_interval(row, box), iv_pow_positive(ebox, j)))
        if not iv_contains_zero(total):
            return 1 if total[0] > 0 else -1
        for _ in range(8):
            alpha.refine()
        prec *= 2
    raise PrecisionLimitError(
        f"sign not separated within {max_bits} bits despite a nonzero value"
    )


def esign_at_infinity(P: BiPoly, h: UniPoly, end: Infinity) -> int:
    """Eventual sign of P(x, e^(h(x))) towards the chosen infinity.

    With t = e^(h(x)) tending to +infinity or 0 (decided by the leading term
    of h), the highest respectively lowest nonvanishing Y-row dominates every
    other row by a factor growing faster than any rational function, so the
    governing row's own limit sign is the answer; ties between rows cannot
    occur.
    """
    if P.is_zero:
        return 0
    if not isinstance(end, Infinity):
        raise InputError("end must be an infinity")
    if h.degree < 1:
        raise InputError("h must be nonconstant")
    h_sign = _limit_sign(h, end)
    if h_sign > 0:
        row = P.rows[-1]
    else:
        row = P.row(P.y_valuation)
    return _limit_sign(row, end)


def _limit_sign(p: UniPoly, end: Infinity) -> int:
    if p.is_zero:
        return 0
    s = sign(p.leading)
    if end.sgn < 0 and p.degree % 2 == 1:
        s = -s
    return s


def esign_lateral(
    P: BiPoly,
    h: UniPoly,
    alpha,
    side: str,
    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS,
) -> int:
    """Sign of P(x, e^(h(x))) immediately to one side of alpha."""
    func = EPolynomial(P, h)
    return lateral_sign(P, func.spec, as_point(alpha), side, func.oracle(max_precision_bits))


class ExpSignOracle:
    """Sign oracle for a fixed h, with per-point refinement sharing and caching.

    Not safe for concurrent use; concurrent callers should query clones
    through separate oracle instances.
    """

    def __init__(self, h: UniPoly, max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS):
        if h.degree < 1 or any(c.denominator != 1 for c in h.coeffs):
            raise InputError("h must be a nonconstant integer polynomial")
        self.h = h
        self.max_precision_bits = max_precision_bits
        self._cache: dict[tuple, int] = {}
        self._working: dict[int, AlgebraicNumber] = {}

    def sign(self, P: BiPoly, point: Point) -> int:
        if isinstance(point, Infinity):
            key = (P.key(), "inf", point.sgn)
            if key not in self._cache:
                self._cache[key] = esign_at_infinity(P, self.h, point)
            return self._cache[key]
        key = (P.key(), "alg", point.uid)
        if key not in self._cache:
            work = self._working.setdefault(point.uid, point.clone())
            self._cache[key] = _esign_at_working(P, self.h, work, self.max_precision_bits)
        return self._cache[key]
