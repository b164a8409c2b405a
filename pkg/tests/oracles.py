"""Independent oracles used by the test suite.

Everything here deliberately avoids the engine's own algorithms: polynomial
root counting uses a classical Sturm chain, subresultants come from plain
pseudo-remainder recursion (cross-checked against sympy), and signs / zero
counts of exponential polynomials f(x) = F(x, e^(h(x))) are certified with
mpmath interval arithmetic plus exact rational and sympy-algebraic
reasoning:

* signs at rational points are decided exactly (transcendence of e^q for
  rational q != 0 settles the zero cases symbolically);
* zeros are isolated by interval subdivision with certified-monotone pieces;
  rational zeros get exact multiplicity collars;
* the algebraic zeros of f are exactly the roots of h where F(., 1)
  vanishes together with the common roots of all Y-rows of F, so "is this
  isolated zero algebraic" is decidable; a transcendental zero lies on
  exactly one irreducible factor of F, which settles whether a second
  function vanishes there (it must share that factor).

Oracles either return a certified answer or raise OracleUndecided; they
never guess.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import sympy

from epoly.polys import BiPoly, UniPoly, poly_divmod, poly_gcd, sign, squarefree_part

_X, _Y = sympy.symbols("x y")


class OracleUndecided(RuntimeError):
    """The oracle could not certify an answer within its effort budget."""


# ---------------------------------------------------------------------------
# classical polynomial machinery


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    """Classical Sturm chain of the square-free part of p."""
    p = squarefree_part(p)
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        _, r = poly_divmod(chain[-2], chain[-1])
        chain.append(-r)
    return chain[:-1]


def _variations(values) -> int:
    out = 0
    prev = 0
    for v in values:
        s = sign(v)
        if s == 0:
            continue
        if prev and s != prev:
            out += 1
        prev = s
    return out


def sturm_count(p: UniPoly, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots in (lo, hi] (whole line by default)."""
    chain = sturm_chain(p)
    if lo is None:
        at_lo = [c.leading * (-1) ** c.degree if not c.is_zero else 0 for c in chain]
    else:
        at_lo = [c(lo) for c in chain]
    if hi is None:
        at_hi = [c.leading if not c.is_zero else 0 for c in chain]
    else:
        at_hi = [c(hi) for c in chain]
    return _variations(at_lo) - _variations(at_hi)


def prem_bipoly(A: BiPoly, B: BiPoly) -> BiPoly:
    """Pseudo-remainder of A by B in Y over Q[X]."""
    dB = B.deg_y
    lc = B.leading_row
    guard = 0
    while not A.is_zero and A.deg_y >= dB:
        shift = A.deg_y - dB
        top = A.leading_row
        A = A * BiPoly.from_x(lc) - B * BiPoly.of([UniPoly.ZERO] * shift + [top])
        guard += 1
        if guard > 500:
            raise OracleUndecided("pseudo-division does not terminate")
    return A


def bipoly_content_free(A: BiPoly) -> BiPoly:
    """Divide by the gcd (over Q[X]) of the Y-coefficients, sign-normalized."""
    if A.is_zero:
        return A
    g = UniPoly.ZERO
    for row in A.rows:
        if not row.is_zero:
            g = row if g.is_zero else poly_gcd(g, row)
    if g.degree <= 0:
        return A.integer_normalized()
    rows = []
    for row in A.rows:
        if row.is_zero:
            rows.append(row)
        else:
            q, r = poly_divmod(row, g)
            assert r.is_zero
            rows.append(q)
    return BiPoly.of(rows).integer_normalized()


def prem_chain(P: BiPoly, Q: BiPoly) -> list[BiPoly]:
    """Primitive pseudo-remainder chain starting from (P, Q)."""
    chain = [P, Q]
    while chain[-1].deg_y > 0:
        nxt = prem_bipoly(chain[-2], chain[-1])
        if nxt.is_zero:
            break
        chain.append(bipoly_content_free(nxt))
    return chain


def proportional_over_rational_functions(A: BiPoly, B: BiPoly) -> bool:
    """A and B nonzero and equal up to a Q(X) factor (exact cross check)."""
    if A.is_zero or B.is_zero or A.deg_y != B.deg_y:
        return False
    return (A * BiPoly.from_x(B.leading_row)) == (B * BiPoly.from_x(A.leading_row))


def squarefree_sets_equal(p: UniPoly, q: UniPoly) -> bool:
    """Same sets of real and complex roots (square-free parts match +-)."""
    if p.is_zero or q.is_zero:
        return p.is_zero == q.is_zero
    if p.degree == 0 or q.degree == 0:
        return p.degree == q.degree
    a, b = squarefree_part(p), squarefree_part(q)
    return a == b or a == -b


def unipoly_to_sympy(p: UniPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * _X**i for i, c in enumerate(p.coeffs))


def sympy_to_unipoly(expr) -> UniPoly:
    poly = sympy.Poly(expr, _X)
    return UniPoly.of(
        [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    )


def bipoly_to_sympy(F: BiPoly):
    return sum(unipoly_to_sympy(F.row(j)) * _Y**j for j in range(F.deg_y + 1))


def sympy_to_bipoly(expr) -> BiPoly:
    poly = sympy.Poly(expr, _Y)
    rows = [UniPoly.ZERO] * (poly.degree() + 1 if poly.degree() >= 0 else 0)
    for monom, coeff in poly.terms():
        rows[monom[0]] = sympy_to_unipoly(coeff)
    return BiPoly.of(rows)


def sympy_subresultants(P: BiPoly, Q: BiPoly):
    return sympy.subresultants(bipoly_to_sympy(P), bipoly_to_sympy(Q), _Y)


# ---------------------------------------------------------------------------
# interval evaluation (mpmath)


def _iv_fraction(r: Fraction):
    return mp.iv.mpf(r.numerator) / r.denominator


def _iv_box(lo: Fraction, hi: Fraction):
    a = _iv_fraction(lo)
    b = _iv_fraction(hi)
    return mp.iv.mpf([a.a, b.b])


def _iv_upoly(p: UniPoly, box):
    total = mp.iv.mpf(0)
    for c in reversed(p.coeffs):
        total = total * box + _iv_fraction(c)
    return total


def iv_value(F: BiPoly, h: UniPoly, lo: Fraction, hi: Fraction, dps: int = 30):
    """Certified mpmath enclosure of f over [lo, hi]."""
    old = mp.iv.dps
    mp.iv.dps = dps
    try:
        box = _iv_box(lo, hi)
        t = mp.iv.exp(_iv_upoly(h, box))
        total = mp.iv.mpf(0)
        for j in range(F.deg_y + 1):
            total += _iv_upoly(F.row(j), box) * t**j
        return total
    finally:
        mp.iv.dps = old


def iv_excludes_zero(F: BiPoly, h: UniPoly, lo: Fraction, hi: Fraction, dps: int = 30):
    box = iv_value(F, h, lo, hi, dps)
    if box > 0:
        return 1
    if box < 0:
        return -1
    return 0


# ---------------------------------------------------------------------------
# exact signs at rational and algebraic points


def exact_sign_at_rational(F: BiPoly, h: UniPoly, r: Fraction) -> int:
    """Certified sign of F(r, e^(h(r))); exact zero detection included."""
    r = Fraction(r)
    hr = h(r)
    rows = [F.row(j)(r) for j in range(F.deg_y + 1)]
    if hr == 0:
        return sign(sum(rows))
    live = [(j, v) for j, v in enumerate(rows) if v != 0]
    if not live:
        return 0
    if len(live) == 1:
        return sign(live[0][1])
    for dps in (30, 120, 480, 2000):
        old = mp.iv.dps
        mp.iv.dps = dps
        try:
            t = mp.iv.exp(_iv_fraction(hr))
            total = mp.iv.mpf(0)
            for j, v in live:
                total += _iv_fraction(v) * t**j
            if total > 0:
                return 1
            if total < 0:
                return -1
        finally:
            mp.iv.dps = old
    raise OracleUndecided(f"sign at {r} not separated")


def _alg_interval(alpha, k: int) -> tuple[Fraction, Fraction]:
    r = alpha.eval_rational(sympy.Rational(1, 2**k))
    c = Fraction(int(r.p), int(r.q))
    return (c - Fraction(1, 2**k), c + Fraction(1, 2**k))


def _frac_interval_poly(p: UniPoly, box: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for c in reversed(p.coeffs):
        cands = (lo * box[0], lo * box[1], hi * box[0], hi * box[1])
        lo, hi = min(cands) + c, max(cands) + c
    return lo, hi


def _vanishes_at(poly: UniPoly, minimal) -> bool:
    if poly.is_zero:
        return True
    p = sympy.Poly(unipoly_to_sympy(poly), _X)
    return sympy.rem(p, minimal).is_zero


def sign_at_algebraic(F: BiPoly, h: UniPoly, alpha) -> int:
    """Exact sign of F(alpha, e^(h(alpha))) for a sympy real algebraic alpha."""
    if alpha.is_Rational:
        return exact_sign_at_rational(F, h, Fraction(int(alpha.p), int(alpha.q)))
    minimal = sympy.minimal_polynomial(alpha, _X, polys=True)
    if _vanishes_at(h, minimal):
        at_one = UniPoly.ZERO
        for j in range(F.deg_y + 1):
            at_one = at_one + F.row(j)
        return _poly_sign_at_algebraic(at_one, alpha, minimal)
    live = [
        (j, F.row(j))
        for j in range(F.deg_y + 1)
        if not _vanishes_at(F.row(j), minimal)
    ]
    if not live:
        return 0
    if len(live) == 1:
        return _poly_sign_at_algebraic(live[0][1], alpha, minimal)
    # value nonzero by transcendence of e^(h(alpha)); certified refinement
    for k in range(8, 200, 16):
        box = _alg_interval(alpha, k)
        hbox = _frac_interval_poly(h, box)
        old = mp.iv.dps
        mp.iv.dps = 30 + k
        try:
            t = mp.iv.exp(_iv_box(*hbox))
            total = mp.iv.mpf(0)
            for j, row in live:
                total += _iv_box(*_frac_interval_poly(row, box)) * t**j
            if total > 0:
                return 1
            if total < 0:
                return -1
        finally:
            mp.iv.dps = old
    raise OracleUndecided("sign at algebraic point not separated")


def _poly_sign_at_algebraic(p: UniPoly, alpha, minimal) -> int:
    """Exact sign of the ordinary polynomial p at alpha."""
    if _vanishes_at(p, minimal):
        return 0
    for k in range(4, 300, 8):
        lo, hi = _frac_interval_poly(p, _alg_interval(alpha, k))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    raise OracleUndecided("polynomial sign at algebraic point not separated")


# ---------------------------------------------------------------------------
# certified zero isolation and counting


def _derivative_bipoly(F: BiPoly, h: UniPoly) -> BiPoly:
    return F.dx() + F.dy() * BiPoly.of([UniPoly.ZERO, h.derivative()])


def _squarefree_factors(F: BiPoly) -> list[BiPoly]:
    """Irreducible factors of F over Q (content dropped)."""
    _, factors = sympy.factor_list(bipoly_to_sympy(F), _X, _Y)
    out = []
    for base, _exp in factors:
        b = sympy_to_bipoly(base)
        if not b.is_constant:
            out.append(b)
    return out


def algebraic_zero_points(F: BiPoly, h: UniPoly, lo: Fraction | None, hi: Fraction | None):
    """All algebraic zeros of f (sympy numbers), optionally windowed.

    f(a) = 0 for algebraic a iff h(a) = 0 and F(a, 1) = 0, or every Y-row of
    F vanishes at a.
    """
    rows = [sympy.Poly(unipoly_to_sympy(F.row(j)), _X) for j in range(F.deg_y + 1)]
    gcd_rows = rows[0]
    for rp in rows[1:]:
        gcd_rows = sympy.gcd(gcd_rows, rp)
    out = []
    seen = set()
    hs = sympy.Poly(unipoly_to_sympy(h), _X)
    at_one = sum(rp.as_expr() for rp in rows)
    if hs.degree() >= 1:
        for root in hs.real_roots():
            value = sympy.Poly(at_one, _X).as_expr().subs(_X, root)
            if sympy.simplify(value) == 0 or _vanishes_at(
                sympy_to_unipoly(at_one) if at_one != 0 else UniPoly.ZERO,
                sympy.minimal_polynomial(root, _X, polys=True),
            ):
                out.append(root)
    if not isinstance(gcd_rows, sympy.Poly):
        gcd_rows = sympy.Poly(gcd_rows, _X)
    if gcd_rows.degree() >= 1:
        for root in gcd_rows.real_roots():
            out.append(root)
    filtered = []
    for root in out:
        key = sympy.nsimplify(root, rational=False)
        if key in seen:
            continue
        seen.add(key)
        if lo is not None and not root > sympy.Rational(lo.numerator, lo.denominator):
            continue
        if hi is not None and not root < sympy.Rational(hi.numerator, hi.denominator):
            continue
        filtered.append(root)
    return filtered


def isolate_zeros(F: BiPoly, h: UniPoly, lo: Fraction, hi: Fraction):
    """Certified records of the distinct zeros of f in the open (lo, hi).

    Records are ("point", m, m) for exact rational zeros, ("alg", a, b) for
    an algebraic zero certified via sympy inside (a, b), or ("bracket",
    a, b) for a sign-change bracket with exactly one (simple) zero.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    Ft = _derivative_bipoly(F, h)
    if Ft.is_zero:
        if exact_sign_at_rational(F, h, lo) == 0:
            raise OracleUndecided("constant zero function")
        return []
    sign_f = lambda r: exact_sign_at_rational(F, h, r)
    lo = _shave_endpoint(F, h, lo, +1)
    hi = _shave_endpoint(F, h, hi, -1)
    if not lo < hi:
        return []
    algebraic = algebraic_zero_points(F, h, lo, hi)
    zeros: list[tuple] = []
    stack = [(lo, hi, 0)]
    while stack:
        a, b, depth = stack.pop()
        for dps in (30, 90):
            if iv_excludes_zero(F, h, a, b, dps):
                break
        else:
            if iv_excludes_zero(Ft, h, a, b, 30) or iv_excludes_zero(Ft, h, a, b, 90):
                sa, sb = sign_f(a), sign_f(b)
                if sa == 0 or sb == 0:
                    raise OracleUndecided("endpoint zero slipped through")
                if sa != sb:
                    zeros.append(("bracket", a, b))
                continue
            if depth > 70:
                rec = _resolve_stalled_piece(F, h, a, b, algebraic)
                zeros.extend(rec)
                continue
            m = (a + b) / 2
            if sign_f(m) == 0:
                m_lo, m_hi = _rational_zero_collar(F, h, m)
                zeros.append(("point", m, m))
                if a < m_lo:
                    stack.append((a, m_lo, depth + 1))
                if m_hi < b:
                    stack.append((m_hi, b, depth + 1))
            else:
                stack.append((a, m, depth + 1))
                stack.append((m, b, depth + 1))
    zeros.sort(key=lambda z: z[1])
    return zeros


def _resolve_stalled_piece(F, h, a, b, algebraic):
    """A piece where neither f nor f' separates: certify an algebraic zero."""
    hits = []
    for root in algebraic:
        lo_q = sympy.Rational(a.numerator, a.denominator)
        hi_q = sympy.Rational(b.numerator, b.denominator)
        if lo_q < root < hi_q and sign_at_algebraic(F, h, root) == 0:
            hits.append(root)
    if len(hits) != 1:
        raise OracleUndecided(
            f"stalled on [{a}, {b}] with {len(hits)} algebraic candidates"
        )
    # certified: the only zero candidates in a stalled piece are where both f
    # and f' vanish; a simple zero of f would have been separated eventually,
    # so keep shrinking around the algebraic hit until the remainder is clean
    root = hits[0]
    for k in range(6, 200, 6):
        ra, rb = _alg_interval(root, k)
        ra, rb = max(ra, a), min(rb, b)
        left_clean = ra <= a or iv_excludes_zero(F, h, a, ra, 60)
        right_clean = rb >= b or iv_excludes_zero(F, h, rb, b, 60)
        if left_clean and right_clean:
            return [("alg", ra, rb)]
    raise OracleUndecided("could not build a collar around an algebraic zero")


def _shave_endpoint(F: BiPoly, h: UniPoly, e: Fraction, direction: int) -> Fraction:
    """Move an endpoint with f(e) = 0 inward past a certified zero-free collar."""
    if exact_sign_at_rational(F, h, e) != 0:
        return e
    m_lo, m_hi = _rational_zero_collar(F, h, e)
    return m_hi if direction > 0 else m_lo


def _rational_zero_collar(F: BiPoly, h: UniPoly, m: Fraction):
    """[m - eps, m + eps] containing no zero of f besides m itself."""
    deriv = F
    k = 0
    while True:
        k += 1
        deriv = _derivative_bipoly(deriv, h)
        if deriv.is_zero:
            raise OracleUndecided("zero of the zero function")
        if exact_sign_at_rational(deriv, h, m) != 0:
            break
        if k > 200:
            raise OracleUndecided("unbounded multiplicity at a rational point")
    eps = Fraction(1, 4)
    for _ in range(120):
        if iv_excludes_zero(deriv, h, m - eps, m + eps, 40):
            return (m - eps, m + eps)
        eps /= 4
    raise OracleUndecided("no certified collar at a rational zero")


def count_zeros(F: BiPoly, h: UniPoly, lo: Fraction, hi: Fraction, G: BiPoly | None = None):
    """Certified (count, plus, minus) census of f's zeros in the open (lo, hi).

    plus/minus count zeros where g > 0 / g < 0 when G is given.
    """
    zeros = isolate_zeros(F, h, Fraction(lo), Fraction(hi))
    if G is None:
        return len(zeros), 0, 0
    plus = minus = 0
    for record in zeros:
        s = _g_sign_at_zero(F, G, h, record)
        if s > 0:
            plus += 1
        elif s < 0:
            minus += 1
    return len(zeros), plus, minus


def _g_sign_at_zero(F: BiPoly, G: BiPoly, h: UniPoly, record) -> int:
    kind, a, b = record
    if kind == "point":
        return exact_sign_at_rational(G, h, a)
    if kind == "alg":
        algebraic = algebraic_zero_points(F, h, a, b)
        hits = [r for r in algebraic if sign_at_algebraic(F, h, r) == 0]
        if len(hits) != 1:
            raise OracleUndecided("ambiguous algebraic zero in collar")
        return sign_at_algebraic(G, h, hits[0])
    # bracket: a simple sign-change zero
    sign_f = lambda r: exact_sign_at_rational(F, h, r)
    sa = sign_f(a)
    factors = None
    for _ in range(300):
        got = iv_excludes_zero(G, h, a, b, 40)
        if got:
            return got
        verdict = _transcendental_common_zero(F, G, h, a, b, factors)
        if verdict is not None:
            kind2, payload = verdict
            if kind2 == "sign":
                return payload
            factors = payload
        m = (a + b) / 2
        sm = sign_f(m)
        if sm == 0:
            return exact_sign_at_rational(G, h, m)
        if sm == sa:
            a = m
        else:
            b = m
    raise OracleUndecided("g sign at a zero not separated")


def _transcendental_common_zero(F, G, h, a, b, factors):
    """Decide whether g vanishes at the unique f-zero in (a, b).

    If the zero is algebraic, settle it outright; otherwise it lies on
    exactly one irreducible factor of F, and g vanishes there iff that
    factor divides G.
    """
    algebraic = algebraic_zero_points(F, h, a, b)
    for root in algebraic:
        if sign_at_algebraic(F, h, root) == 0:
            return ("sign", sign_at_algebraic(G, h, root))
    if factors is None:
        factors = _squarefree_factors(F)
    straddling = [
        p for p in factors if not iv_excludes_zero(p, h, a, b, 40)
    ]
    if len(straddling) != 1:
        return ("factors", factors)  # keep shrinking
    factor = straddling[0]
    gs = bipoly_to_sympy(G)
    fs = bipoly_to_sympy(factor)
    if sympy.rem(sympy.Poly(gs, _Y), sympy.Poly(fs, _Y)).is_zero or sympy.div(
        sympy.Poly(gs, _X, _Y), sympy.Poly(fs, _X, _Y)
    )[1].is_zero:
        return ("sign", 0)
    return ("factors", factors)


# ---------------------------------------------------------------------------
# whole-line counting via certified tail bounds


def limit_sign(F: BiPoly, h: UniPoly, direction: int) -> int:
    """Eventual sign towards +inf (direction=+1) or -inf (-1)."""
    hs = sign(h.leading) * (1 if direction > 0 or h.degree % 2 == 0 else -1)
    row = F.rows[-1] if hs > 0 else F.row(F.y_valuation)
    s = sign(row.leading)
    if direction < 0 and row.degree % 2 == 1:
        s = -s
    return s


def _oracle_pder_chain(F: BiPoly, h: UniPoly) -> list[BiPoly]:
    chain = [F]
    while True:
        cur = chain[-1]
        derived = _derivative_bipoly(cur, h)
        if derived.is_zero:
            return chain
        free = cur.row(0)
        if free.degree <= 0:
            derived = derived.y_shift_down(derived.y_valuation)
        chain.append(derived)


def zero_free_tail_bound(F: BiPoly, h: UniPoly, direction: int) -> Fraction:
    """Rational M such that f has no zero beyond M in the chosen direction.

    Works down the pseudo-derivative chain: each member is monotone wherever
    the next one is zero-free, so once its sign at M agrees with its
    eventual sign there is no later crossing.
    """
    chain = _oracle_pder_chain(F, h)
    bound = Fraction(1)
    for level in range(len(chain) - 1, -1, -1):
        g = chain[level]
        target = limit_sign(g, h, direction)
        step = Fraction(1)
        for _ in range(600):
            if exact_sign_at_rational(g, h, direction * bound) == target:
                break
            bound += step
            step *= 2
        else:
            raise OracleUndecided("tail bound escalation failed")
    return direction * bound


def count_zeros_full_line(F: BiPoly, h: UniPoly, G: BiPoly | None = None):
    left = zero_free_tail_bound(F, h, -1)
    right = zero_free_tail_bound(F, h, +1)
    lo = min(left, Fraction(-1)) - 1
    hi = max(right, Fraction(1)) + 1
    return count_zeros(F, h, lo, hi, G)
