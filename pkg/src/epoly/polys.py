"""Exact polynomial arithmetic over the rationals.

Univariate polynomials are stored densely as a tuple of coefficients ordered
by increasing degree; bivariate ones as a tuple of Y-coefficient rows, each
row a univariate polynomial in X.  Everything is immutable and hashable, and
all arithmetic is exact: scalars are ``fractions.Fraction`` throughout and
floats are rejected at the boundary.

The module also provides the few pieces of exact linear algebra the engine
needs: fraction-free (Bareiss) determinants, dense interpolation, and exact
Gaussian elimination for small systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import InputError, InternalError

Rat = Fraction


def as_rational(value) -> Fraction:
    """Coerce an int or Fraction to Fraction; reject anything inexact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InputError(f"exact rational expected, got {value!r}")


def sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# univariate polynomials


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies X**i.

    The zero polynomial has an empty coefficient tuple; otherwise the last
    coefficient is nonzero.
    """

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(values: Iterable) -> "UniPoly":
        cs = [as_rational(v) for v in values]
        while cs and cs[-1] == 0:
            cs.pop()
        return UniPoly(tuple(cs))

    @staticmethod
    def constant(value) -> "UniPoly":
        return UniPoly.of([value])

    # X as a polynomial
    @staticmethod
    def x() -> "UniPoly":
        return UniPoly.of([0, 1])

    ZERO: "UniPoly" = None  # type: ignore[assignment]  # set below
    ONE: "UniPoly" = None  # type: ignore[assignment]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly.of(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if self.is_zero or other.is_zero:
                return UniPoly(())
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return UniPoly.of(out)
        c = as_rational(other)
        if c == 0:
            return UniPoly(())
        return UniPoly(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise InputError("negative polynomial power")
        out = UniPoly.ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly.of([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, a) -> "UniPoly":
        """Taylor shift: returns p(X + a)."""
        a = as_rational(a)
        out = list(self.coeffs)
        n = len(out)
        # synthetic division by (X - (-a)) repeated
        for i in range(1, n):
            for j in range(n - 1, i - 1, -1):
                out[j - 1] += a * out[j]
        return UniPoly.of(out)

    # -- content and primitive part --------------------------------------

    def content(self) -> Fraction:
        """Rational content, carrying the sign of the leading coefficient.

        ``p == p.content() * p.primitive_part()`` with a primitive part that
        has integer coefficients, positive leading coefficient and content 1.
        """
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        c = Fraction(num, den)
        return c if self.leading > 0 else -c

    def primitive_part(self) -> "UniPoly":
        if self.is_zero:
            return self
        c = self.content()
        return UniPoly(tuple(a / c for a in self.coeffs))

    def int_coeffs(self) -> list[int]:
        """Coefficients of the primitive integer form (ascending)."""
        p = self.primitive_part()
        return [int(c) for c in p.coeffs]

    def __str__(self) -> str:
        return format_poly(self.coeffs, "x")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"UniPoly({self})"


UniPoly.ZERO = UniPoly(())
UniPoly.ONE = UniPoly((Fraction(1),))


def poly_divmod(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Exact division with remainder in Q[X]."""
    if b.is_zero:
        raise InputError("division by the zero polynomial")
    rem = list(a.coeffs)
    quo = [Fraction(0)] * max(0, len(rem) - len(b.coeffs) + 1)
    db = b.degree
    lb = b.leading
    while len(rem) - 1 >= db and rem:
        k = len(rem) - 1 - db
        q = rem[-1] / lb
        quo[k] = q
        for i, c in enumerate(b.coeffs):
            rem[k + i] -= q * c
        while rem and rem[-1] == 0:
            rem.pop()
    return UniPoly.of(quo), UniPoly.of(rem)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Primitive gcd in Q[X] (integer coefficients, positive leading)."""
    a, b = a.primitive_part(), b.primitive_part()
    while not b.is_zero:
        _, r = poly_divmod(a, b)
        a, b = b, r.primitive_part() if not r.is_zero else UniPoly.ZERO
    return a


def squarefree_part(p: UniPoly) -> UniPoly:
    """p divided by gcd(p, p'); primitive with positive leading coefficient."""
    if p.is_zero:
        raise InputError("zero polynomial")
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.primitive_part()
    q, r = poly_divmod(p, g)
    if not r.is_zero:
        raise InternalError("gcd failed to divide its argument")
    return q.primitive_part()


def interpolate(points: Sequence[tuple]) -> UniPoly:
    """Unique polynomial of degree < len(points) through the given points.

    Uses Newton's divided differences; abscissae must be pairwise distinct.
    """
    xs = [as_rational(x) for x, _ in points]
    ys = [as_rational(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise InputError("interpolation abscissae must be pairwise distinct")
    n = len(points)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form
    poly = UniPoly.ZERO
    for i in range(n - 1, -1, -1):
        poly = poly * UniPoly.of([-xs[i], 1]) + UniPoly.constant(coef[i])
    return poly


def format_poly(coeffs: Sequence[Fraction], var: str) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            term = _format_coeff(abs(c))
        else:
            mag = abs(c)
            head = "" if mag == 1 else _format_coeff(mag) + "*"
            term = head + (var if i == 1 else f"{var}^{i}")
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append((" + " if c > 0 else " - ") + term)
    return "".join(parts)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# bivariate polynomials


@dataclass(frozen=True)
class BiPoly:
    """Dense bivariate polynomial; ``rows[j]`` is the X-coefficient of Y**j.

    The zero polynomial has no rows; otherwise the last row is nonzero.
    """

    rows: tuple[UniPoly, ...]

    @staticmethod
    def of(rows: Iterable) -> "BiPoly":
        rs = [r if isinstance(r, UniPoly) else UniPoly.of(r) for r in rows]
        while rs and rs[-1].is_zero:
            rs.pop()
        return BiPoly(tuple(rs))

    @staticmethod
    def constant(value) -> "BiPoly":
        return BiPoly.of([UniPoly.constant(value)])

    @staticmethod
    def from_x(p: UniPoly) -> "BiPoly":
        return BiPoly.of([p])

    @staticmethod
    def x() -> "BiPoly":
        return BiPoly.of([UniPoly.x()])

    @staticmethod
    def y() -> "BiPoly":
        return BiPoly.of([UniPoly.ZERO, UniPoly.ONE])

    ZERO: "BiPoly" = None  # type: ignore[assignment]
    ONE: "BiPoly" = None  # type: ignore[assignment]

    @property
    def is_zero(self) -> bool:
        return not self.rows

    @property
    def deg_y(self) -> int:
        return len(self.rows) - 1

    @property
    def deg_x(self) -> int:
        return max((r.degree for r in self.rows if not r.is_zero), default=-1)

    @property
    def total_degree(self) -> int:
        return max(
            (j + r.degree for j, r in enumerate(self.rows) if not r.is_zero),
            default=-1,
        )

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (self.deg_y == 0 and self.rows[0].degree <= 0)

    def row(self, j: int) -> UniPoly:
        return self.rows[j] if 0 <= j < len(self.rows) else UniPoly.ZERO

    @property
    def leading_row(self) -> UniPoly:
        """Leading Y-coefficient (a polynomial in X)."""
        if self.is_zero:
            raise InputError("zero polynomial has no leading coefficient")
        return self.rows[-1]

    def __add__(self, other: "BiPoly") -> "BiPoly":
        a, b = self.rows, other.rows
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, r in enumerate(b):
            out[j] = out[j] + r
        return BiPoly.of(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly(tuple(-r for r in self.rows))

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            if self.is_zero or other.is_zero:
                return BiPoly(())
            out = [UniPoly.ZERO] * (len(self.rows) + len(other.rows) - 1)
            for i, a in enumerate(self.rows):
                if a.is_zero:
                    continue
                for j, b in enumerate(other.rows):
                    if not b.is_zero:
                        out[i + j] = out[i + j] + a * b
            return BiPoly.of(out)
        if isinstance(other, UniPoly):
            return BiPoly.of([r * other for r in self.rows])
        c = as_rational(other)
        return BiPoly.of([r * c for r in self.rows])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise InputError("negative polynomial power")
        out = BiPoly.ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def dx(self) -> "BiPoly":
        return BiPoly.of([r.derivative() for r in self.rows])

    def dy(self) -> "BiPoly":
        return BiPoly.of([j * r for j, r in enumerate(self.rows)][1:])

    def eval_x(self, x0) -> UniPoly:
        """Specialize X, leaving a univariate polynomial in Y."""
        return UniPoly.of([r(x0) for r in self.rows])

    def eval_y(self, y0) -> UniPoly:
        """Specialize Y, leaving a univariate polynomial in X."""
        y0 = as_rational(y0)
        acc = UniPoly.ZERO
        for r in reversed(self.rows):
            acc = acc * y0 + r
        return acc

    def __call__(self, x, y) -> Fraction:
        return self.eval_x(x)(y)

    @property
    def y_valuation(self) -> int:
        """Largest k with Y**k dividing the polynomial (0 for constants)."""
        if self.is_zero:
            raise InputError("zero polynomial has no Y-valuation")
        for j, r in enumerate(self.rows):
            if not r.is_zero:
                return j
        raise InternalError("normalized polynomial with all-zero rows")

    def y_shift_down(self, k: int) -> "BiPoly":
        """Exact division by Y**k."""
        if k == 0:
            return self
        if any(not r.is_zero for r in self.rows[:k]):
            raise InputError("polynomial not divisible by the requested Y power")
        return BiPoly(self.rows[k:])

    def integer_normalized(self) -> "BiPoly":
        """Divide by the positive rational content; sign-preserving."""
        if self.is_zero:
            return self
        num = 0
        den = 1
        for r in self.rows:
            for c in r.coeffs:
                num = gcd(num, c.numerator)
                den = lcm(den, c.denominator)
        c = Fraction(num, den)
        return BiPoly(tuple(r * (1 / c) for r in self.rows))

    def key(self) -> tuple:
        """Hashable canonical key (used for caching and deduplication)."""
        return tuple(r.coeffs for r in self.rows)

    def __str__(self) -> str:
        return format_bipoly(self)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"BiPoly({self})"


BiPoly.ZERO = BiPoly(())
BiPoly.ONE = BiPoly((UniPoly.ONE,))


def format_bipoly(p: BiPoly, xvar: str = "x", yvar: str = "E") -> str:
    """Render with explicit ``*`` products, e.g. ``(6*x - 1)*E^2 - x``."""
    if p.is_zero:
        return "0"
    parts = []
    for j in range(p.deg_y, -1, -1):
        r = p.row(j)
        if r.is_zero:
            continue
        ypow = None if j == 0 else (yvar if j == 1 else f"{yvar}^{j}")
        term, neg = _row_term(r, xvar, ypow)
        if not parts:
            parts.append("-" + term if neg else term)
        else:
            parts.append((" - " if neg else " + ") + term)
    return "".join(parts)


def _row_term(r: UniPoly, xvar: str, ypow: str | None) -> tuple[str, bool]:
    # Returns the rendered magnitude and whether the whole term is negated.
    nonzero = [c for c in r.coeffs if c != 0]
    if len(nonzero) > 1:
        # multi-term coefficient: parenthesize, pulling a negative leader out
        body = format_poly((-r).coeffs, xvar) if r.leading < 0 else format_poly(r.coeffs, xvar)
        term = f"({body})"
        return (term if ypow is None else f"{term}*{ypow}"), r.leading < 0
    c = nonzero[0]
    k = r.degree
    pieces = []
    if abs(c) != 1 or (k == 0 and ypow is None):
        pieces.append(_format_coeff(abs(c)))
    if k >= 1:
        pieces.append(xvar if k == 1 else f"{xvar}^{k}")
    if ypow is not None:
        pieces.append(ypow)
    if not pieces:  # coefficient 1, no variables
        pieces.append("1")
    return "*".join(pieces), c < 0


# ---------------------------------------------------------------------------
# exact linear algebra


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Entries may be ints or Fractions; the integer fast path keeps all
    intermediate values integral, which bounds coefficient growth
    polynomially instead of exponentially.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise InputError("determinant requires a square matrix")
    if n == 0:
        return Fraction(1)
    rows = [list(r) for r in matrix]
    all_int = all(isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1) for r in rows for e in r)
    if all_int:
        rows = [[int(e) for e in r] for r in rows]
        return Fraction(_bareiss_int(rows))
    rows = [[as_rational(e) for e in r] for r in rows]
    return _bareiss_frac(rows)


def _bareiss_int(m: list[list[int]]) -> int:
    n = len(m)
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                q, r = divmod(num, prev)
                if r:
                    raise InternalError("Bareiss exact division failed")
                m[i][j] = q
            m[i][k] = 0
        prev = pivot
    return sgn * m[n - 1][n - 1]


def _bareiss_frac(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    sgn = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = pivot
    return sgn * m[n - 1][n - 1]


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly by Gaussian elimination."""
    n = len(matrix)
    a = [[as_rational(e) for e in row] + [as_rational(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InternalError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        pivval = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / pivval
                for c in range(col, n + 1):
                    a[r][c] -= factor * a[col][c]
    return [a[i][n] / a[i][i] for i in range(n)]


def independent_row_indices(matrix: Sequence[Sequence], need: int) -> list[int]:
    """Indices of ``need`` rows forming an invertible square submatrix.

    The input is assumed to have full column rank ``need``; greedy Gaussian
    elimination then always succeeds.
    """
    width = len(matrix[0]) if matrix else 0
    if need > width:
        raise InternalError("cannot select more rows than columns")
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    for idx, row in enumerate(matrix):
        vec = [as_rational(e) for e in row]
        for b in basis:
            lead = next((c for c in range(width) if b[c] != 0), None)
            if lead is not None and vec[lead] != 0:
                factor = vec[lead] / b[lead]
                for c in range(width):
                    vec[c] -= factor * b[c]
        if any(v != 0 for v in vec):
            basis.append(vec)
            chosen.append(idx)
            if len(chosen) == need:
                return chosen
    raise InternalError("matrix does not have the required row rank")
