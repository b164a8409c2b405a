"""Real algebraic numbers with Thom encodings and refinable intervals.

A number is represented by a square-free primitive integer polynomial
together with an isolating interval with rational, non-root endpoints (for a
rational root the interval collapses to a point).  Root isolation uses
Descartes' rule of signs with bisection; every query below is exact.

Two views of the same root coexist deliberately: the Thom encoding (the sign
vector of the defining polynomial's derivatives at the root) identifies and
orders roots of one polynomial purely symbolically, while the interval view
supports sign evaluation of other polynomials and comparisons across
different defining polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence, Union

from .errors import InputError, InternalError
from .intervals import iv_contains_zero, poly_interval
from .polys import UniPoly, as_rational, poly_gcd, sign, squarefree_part


class Infinity:
    """Signed infinity endpoint; use the NEG_INF / POS_INF singletons."""

    __slots__ = ("sgn",)

    def __init__(self, sgn: int):
        self.sgn = sgn

    def __repr__(self) -> str:
        return "+inf" if self.sgn > 0 else "-inf"


NEG_INF = Infinity(-1)
POS_INF = Infinity(+1)

Point = Union["AlgebraicNumber", Infinity]


# ---------------------------------------------------------------------------
# integer helpers for Descartes / bisection isolation


def _variations(cs: Sequence[int]) -> int:
    count = 0
    prev = 0
    for c in cs:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _shift1(cs: list[int]) -> list[int]:
    """Taylor shift by one: coefficients of p(X + 1)."""
    out = list(cs)
    n = len(out)
    for i in range(1, n):
        for j in range(n - 1, i - 1, -1):
            out[j - 1] += out[j]
    return out


def _interval_variations(cs: list[int]) -> int:
    """Descartes bound for the roots of p in the open unit interval."""
    return _variations(_shift1(list(reversed(cs))))


def _sign_at_rational(int_coeffs: Sequence[int], x: Fraction) -> int:
    """Sign of the integer polynomial at a rational point, in integers."""
    a, b = x.numerator, x.denominator
    acc = 0
    bp = 1
    for c in reversed(int_coeffs):
        acc = acc * a + c * bp
        bp *= b
    # Horner above accumulates sum c_i a^i b^(n-i) with one extra b factor
    return sign(acc)


def _sign_normalized_ints(q: UniPoly) -> list[int]:
    """Integer coefficients with the same signs as q (positive scaling)."""
    if q.is_zero:
        return []
    c = abs(q.content())
    return [int(v / c) for v in q.coeffs]


# ---------------------------------------------------------------------------


class AlgebraicNumber:
    """A real root of an integer polynomial, refinable on demand.

    Refinement mutates the isolating interval in place (monotonically); use
    :meth:`clone` when independent refinement contexts are needed.  ``uid``
    is a process-unique serial number, safe as a cache key where ``id()``
    would be recycled.
    """

    __slots__ = ("poly", "lo", "hi", "uid", "_ints", "_thom")

    _counter = 0

    def __init__(self, poly: UniPoly, lo, hi):
        self.poly = poly
        self.lo = as_rational(lo)
        self.hi = as_rational(hi)
        AlgebraicNumber._counter += 1
        self.uid = AlgebraicNumber._counter
        self._ints = [int(c) for c in poly.coeffs]
        self._thom: tuple[int, ...] | None = None

    @staticmethod
    def rational(value) -> "AlgebraicNumber":
        v = as_rational(value)
        poly = UniPoly.of([-v.numerator, v.denominator])
        return AlgebraicNumber(poly, v, v)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise InputError("number not known to be rational")
        return self.lo

    def clone(self) -> "AlgebraicNumber":
        copy = AlgebraicNumber(self.poly, self.lo, self.hi)
        copy._thom = self._thom
        return copy

    def defining_sign_at(self, x: Fraction) -> int:
        return _sign_at_rational(self._ints, x)

    def refine(self) -> None:
        """Halve the isolating interval (or collapse onto a rational root)."""
        if self.is_rational:
            return
        mid = (self.lo + self.hi) / 2
        smid = self.defining_sign_at(mid)
        if smid == 0:
            self.lo = self.hi = mid
            return
        slo = self.defining_sign_at(self.lo)
        if slo != 0:
            if slo != smid:
                self.hi = mid
            else:
                self.lo = mid
            return
        # the left endpoint is another root of the defining polynomial;
        # decide the half by Descartes parity (at most one root inside)
        if _descartes_parity(self._ints, self.lo, mid):
            self.hi = mid
        else:
            self.lo = mid

    def refine_below(self, width: Fraction) -> None:
        while not self.is_rational and self.hi - self.lo >= width:
            self.refine()

    def approx(self, bits: int = 32) -> Fraction:
        """Rational approximation within 2**-bits (display only)."""
        self.refine_below(Fraction(1, 1 << bits))
        return (self.lo + self.hi) / 2

    @property
    def thom(self) -> tuple[int, ...]:
        """Signs of p', p'', ..., p^(deg p) at the root."""
        if self._thom is None:
            derivs = []
            d = self.poly.derivative()
            while not d.is_zero:
                derivs.append(d)
                d = d.derivative()
            self._thom = tuple(sign_at(q, self) for q in derivs)
        return self._thom

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgebraicNumber({self.lo})"
        return f"AlgebraicNumber({self.poly} in ({self.lo}, {self.hi}))"


def _descartes_parity(int_coeffs: Sequence[int], lo: Fraction, hi: Fraction) -> bool:
    """True iff the polynomial has a root in (lo, hi), assuming at most one."""
    p = UniPoly.of(int_coeffs).shift(lo)
    w = hi - lo
    scaled = UniPoly.of([c * w**i for i, c in enumerate(p.coeffs)])
    cs = _sign_normalized_ints(scaled)
    n = len(int_coeffs) - 1
    cs = cs + [0] * (n + 1 - len(cs))
    return _interval_variations(cs) % 2 == 1


# ---------------------------------------------------------------------------
# root isolation


def isolate_roots(p: UniPoly) -> list[AlgebraicNumber]:
    """All distinct real roots of p, ascending, with isolating intervals.

    Multiplicities are collapsed by working with the square-free part.
    The returned numbers carry Thom encodings (computed on first access and
    forced here, as documented).
    """
    roots = isolate_roots_lazy(p)
    for r in roots:
        _ = r.thom
    return roots


def isolate_roots_lazy(p: UniPoly) -> list[AlgebraicNumber]:
    """Same as :func:`isolate_roots` without forcing Thom encodings."""
    if p.is_zero:
        raise InputError("cannot isolate roots of the zero polynomial")
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return []
    cs = [int(c) for c in sf.coeffs]
    lead = abs(cs[-1])
    rest = max((abs(c) for c in cs[:-1]), default=0)
    bound = 1
    while bound * lead <= lead + rest:
        bound <<= 1
    # map (-B, B) onto the unit interval: q(t) = sf(-B + 2B t)
    shifted = _taylor_shift_int(cs, -bound)
    scale = 2 * bound
    q = [shifted[i] * scale**i for i in range(len(shifted))]
    found: list[tuple[Fraction, Fraction]] = []
    _descartes_bisect(q, Fraction(-bound), Fraction(2 * bound), found)
    return [AlgebraicNumber(sf, lo, hi) for lo, hi in found]


def _taylor_shift_int(cs: Sequence[int], a: int) -> list[int]:
    out = list(cs)
    n = len(out)
    for i in range(1, n):
        for j in range(n - 1, i - 1, -1):
            out[j - 1] += a * out[j]
    return out


def _descartes_bisect(q: list[int], lo: Fraction, width: Fraction, out: list) -> None:
    # explicit stack; root separation can be far smaller than recursion limits
    stack = [(q, lo, width)]
    pending: list[tuple[Fraction, Fraction]] = []
    while stack:
        q, lo, width = stack.pop()
        v = _interval_variations(q)
        if v == 0:
            continue
        if v == 1:
            pending.append((lo, lo + width))
            continue
        n = len(q) - 1
        left = [q[i] << (n - i) for i in range(len(q))]
        mid = lo + width / 2
        # push right first so results pop in ascending order
        stack.append((_shift1(list(left)), mid, width / 2))
        if sum(left) == 0:
            pending.append((mid, mid))
        stack.append((left, lo, width / 2))
    pending.sort(key=lambda iv: iv[0])
    out.extend(pending)


# ---------------------------------------------------------------------------
# exact sign evaluation and comparisons


def sign_at(q: UniPoly, alpha: "AlgebraicNumber") -> int:
    """Exact sign of q at the algebraic number alpha."""
    if q.is_zero:
        return 0
    if alpha.is_rational:
        return _sign_at_rational(_sign_normalized_ints(q), alpha.value)
    if q.degree == 0:
        return sign(q.coeffs[0])
    # an adjacent rational root of the defining polynomial may sit on an
    # interval endpoint; refine it away before the sign-change test below
    while not alpha.is_rational and (
        alpha.defining_sign_at(alpha.lo) == 0 or alpha.defining_sign_at(alpha.hi) == 0
    ):
        alpha.refine()
    if alpha.is_rational:
        return _sign_at_rational(_sign_normalized_ints(q), alpha.value)
    g = poly_gcd(q, alpha.poly)
    if g.degree >= 1:
        gi = _sign_normalized_ints(g)
        slo = _sign_at_rational(gi, alpha.lo)
        shi = _sign_at_rational(gi, alpha.hi)
        if slo == 0 or shi == 0:
            raise InternalError("isolating interval has a root endpoint")
        if slo != shi:
            return 0
    qn = UniPoly.of(_sign_normalized_ints(q))
    while True:
        box = poly_interval(qn, (alpha.lo, alpha.hi))
        if not iv_contains_zero(box):
            return 1 if box[0] > 0 else -1
        alpha.refine()


def compare(a: Point, b: Point) -> int:
    """Total order on algebraic numbers and the two infinities: -1, 0, +1."""
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        ka = a.sgn if isinstance(a, Infinity) else 0
        kb = b.sgn if isinstance(b, Infinity) else 0
        return sign(ka - kb)
    if a is b:
        return 0
    if a.is_rational and b.is_rational:
        return sign(a.value - b.value)
    for _ in range(2):
        c = _interval_compare(a, b)
        if c is not None:
            return c
        a.refine()
        b.refine()
    # structural equality: a == b forces a common factor of the two
    # defining polynomials vanishing at both
    g = poly_gcd(a.poly, b.poly)
    if g.degree >= 1 and sign_at(g, a) == 0 and sign_at(g, b) == 0:
        groots = isolate_roots_lazy(g)
        ia = _locate_among(a, groots)
        ib = _locate_among(b, groots)
        return sign(ia - ib)
    while True:
        c = _interval_compare(a, b)
        if c is not None:
            return c
        a.refine()
        b.refine()


def _interval_compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int | None:
    if a.is_rational and b.is_rational:
        return sign(a.value - b.value)
    if a.hi <= b.lo:
        return -1 if not (a.is_rational and b.is_rational) else sign(a.value - b.value)
    if b.hi <= a.lo:
        return 1
    return None


def _locate_among(a: AlgebraicNumber, candidates: list[AlgebraicNumber]) -> int:
    """Index of the candidate equal to a; a is known to be one of them."""
    alive = list(range(len(candidates)))
    while len(alive) > 1:
        still = []
        for i in alive:
            c = candidates[i]
            if not (a.hi < c.lo or c.hi < a.lo):
                still.append(i)
        if len(still) == len(alive):
            a.refine()
            for i in alive:
                candidates[i].refine()
        alive = still if still else alive
    if not alive:
        raise InternalError("algebraic number lost among the roots of its factor")
    return alive[0]


def compare_sign_vectors(v1: Sequence[int], v2: Sequence[int]) -> int:
    """Order two derivative sign vectors sharing a function chain.

    The vectors must have equal length and agree at the top index.  The
    highest differing index decides, with orientation given by the common
    sign one level above it.
    """
    if len(v1) != len(v2):
        raise InputError("sign vectors of different lengths")
    if tuple(v1) == tuple(v2):
        return 0
    k = max(i for i in range(len(v1)) if v1[i] != v2[i])
    if k + 1 >= len(v1) or v1[k + 1] != v2[k + 1] or v1[k + 1] == 0:
        raise InternalError("sign vectors do not belong to a common chain")
    if v1[k + 1] > 0:
        return sign(v1[k] - v2[k])
    return -sign(v1[k] - v2[k])


def order_roots(roots: Sequence[AlgebraicNumber]) -> list[AlgebraicNumber]:
    """Sort roots of one polynomial ascending using Thom encodings only."""
    if not roots:
        return []
    first = roots[0].poly
    for r in roots:
        if r.poly != first:
            raise InputError("order_roots requires a shared defining polynomial")

    def cmp(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
        return compare_sign_vectors((0,) + a.thom, (0,) + b.thom)

    return sorted(roots, key=cmp_to_key(cmp))


def realizable_sign_conditions(
    p: UniPoly, qs: Sequence[UniPoly]
) -> list[tuple[AlgebraicNumber, tuple[int, ...]]]:
    """For each real root of p (ascending), the sign tuple of qs there."""
    if p.is_zero:
        raise InputError("zero polynomial")
    return [(r, tuple(sign_at(q, r) for q in qs)) for r in isolate_roots(p)]


# ---------------------------------------------------------------------------
# helpers shared by the query machinery


def as_point(x) -> Point:
    if isinstance(x, (AlgebraicNumber, Infinity)):
        return x
    return AlgebraicNumber.rational(x)


class RealInterval:
    """Interval with algebraic or infinite endpoints, lo strictly below hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = as_point(lo)
        self.hi = as_point(hi)
        if compare(self.lo, self.hi) >= 0:
            raise InputError("interval endpoints must satisfy lo < hi")

    @staticmethod
    def full_line() -> "RealInterval":
        return RealInterval(NEG_INF, POS_INF)

    def __repr__(self) -> str:
        return f"RealInterval({self.lo!r}, {self.hi!r})"


def rational_between(a: Point, b: Point) -> Fraction:
    """A rational strictly between a and b (a < b required)."""
    if isinstance(a, Infinity) and isinstance(b, Infinity):
        if a.sgn >= b.sgn:
            raise InputError("empty interval")
        return Fraction(0)
    if isinstance(a, Infinity):
        if a.sgn > 0:
            raise InputError("empty interval")
        b.refine()
        return b.lo - 1
    if isinstance(b, Infinity):
        if b.sgn < 0:
            raise InputError("empty interval")
        a.refine()
        return a.hi + 1
    if a.is_rational and b.is_rational:
        if not a.value < b.value:
            raise InputError("empty interval")
        return (a.value + b.value) / 2
    while not a.hi < b.lo:
        a.refine()
        b.refine()
    return (a.hi + b.lo) / 2
