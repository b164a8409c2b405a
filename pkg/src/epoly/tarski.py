"""Zero counting, feasible sign conditions and existential decision.

The central quantity is the query

    TQ(f, g; a, b) = #{x in (a,b) : f=0, g>0} - #{x in (a,b) : f=0, g<0}

for functions f = F(x, phi(x)), g = G(x, phi(x)).  It is assembled from the
subresultant chain of F'G and F: the roots of the chain's coefficient
polynomials partition (a, b) into pieces on which the signed chain is a
genuine sign-counting sequence, lateral signs at the partition points come
from the oracle through the derivative rule, and the endpoint contributions
use one-sided signs, so zeros of f at a or b are never counted (the query is
over the open interval; such endpoint zeros are still reported).

Feasible sign conditions over a zero set are recovered from queries against
monomials g_1^a_1 ... g_s^a_s with exponents in {0, 1, 2} by exact linear
algebra; the full feasible list over an interval combines the zero sets of
each function, the critical points of their product, and the endpoint signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebraic import (
    AlgebraicNumber,
    Infinity,
    Point,
    RealInterval,
    compare,
    isolate_roots_lazy,
    rational_between,
    sign_at,
)
from .errors import InputError, InternalError
from .formulas import Formula, evaluate_formula, formula_polynomials
from .pfaffian import (
    PfaffianSpec,
    SignOracle,
    _lateral_search_cap,
    derivative_poly,
    sign_sequence,
    variation_count,
)
from .polys import BiPoly, UniPoly, independent_row_indices, solve_linear
from .sturmdata import build_sturm_data, separating_polynomial

SignTuple = tuple[int, ...]

SIGN_CHARS = {-1: "<", 0: "=", 1: ">"}


def format_sign_tuple(signs: SignTuple) -> str:
    return "(" + ", ".join(SIGN_CHARS[s] for s in signs) + ")"


@dataclass(frozen=True)
class TarskiQueryResult:
    """Query value with the partition evidence it was assembled from.

    value == positive_zeros - negative_zeros + sum(interval_variations);
    ``partition`` holds the interior partition points, ``endpoint_zeros``
    flags whether f vanishes at a finite endpoint (reported, not counted).
    """

    value: int
    partition: tuple[AlgebraicNumber, ...]
    interval_variations: tuple[int, ...]
    positive_zeros: int
    negative_zeros: int
    endpoint_zeros: tuple[bool, bool]


class _LateralSigns:
    """Cached one-sided signs of chain polynomials at partition points."""

    def __init__(self, spec: PfaffianSpec, oracle: SignOracle):
        self.spec = spec
        self.oracle = oracle
        self._chains: dict[tuple, list[BiPoly]] = {}
        self._memo: dict[tuple, int] = {}

    def sign(self, theta: BiPoly, point: Point, side: str) -> int:
        if isinstance(point, Infinity):
            return self.oracle.sign(theta, point)
        key = (theta.key(), point.uid, side)
        if key in self._memo:
            return self._memo[key]
        s = self.oracle.sign(theta, point)
        if s == 0:
            s = self._first_nonzero_derivative(theta, point, side)
        self._memo[key] = s
        return s

    def _first_nonzero_derivative(self, theta: BiPoly, point: Point, side: str) -> int:
        cap = _lateral_search_cap(theta, self.spec)
        chain = self._chains.setdefault(theta.key(), [theta])
        for order in range(1, cap + 1):
            while len(chain) <= order:
                chain.append(derivative_poly(chain[-1], self.spec))
            current = chain[order]
            if current.is_zero:
                break
            s = self.oracle.sign(current, point)
            if s != 0:
                if side == "left" and order % 2 == 1:
                    return -s
                return s
        raise InputError("chain function vanishes identically near a partition point")


def _lift_constant_sign(G: BiPoly) -> BiPoly:
    # (Y^2 + 1) * G has positive Y-degree and the same sign everywhere on
    # the curve y = phi(x)
    return (BiPoly.y() ** 2 + BiPoly.ONE) * G


def tarski_query(
    F: BiPoly,
    G: BiPoly,
    interval: RealInterval,
    spec: PfaffianSpec,
    oracle: SignOracle,
) -> TarskiQueryResult:
    """Signed count of the zeros of f in the open interval, weighted by g."""
    if F.is_zero:
        raise InputError("f must be a nonzero function")
    if G.is_zero:
        raise InputError("g must be a nonzero function")
    _check_domain(interval, spec)
    if F.deg_y == 0:
        return _pure_polynomial_query(F, G, interval, oracle)
    if G.deg_y == 0:
        G = _lift_constant_sign(G)

    data = build_sturm_data(F, G, spec)
    separating = separating_polynomial(data)
    roots: list[AlgebraicNumber] = []
    if separating.degree >= 1:
        for r in isolate_roots_lazy(separating):
            if compare(r, interval.lo) > 0 and compare(r, interval.hi) < 0:
                roots.append(r)
    points: list[Point] = [interval.lo, *roots, interval.hi]

    lateral = _LateralSigns(spec, oracle)
    chain = [data.R(i) for i in range(0, data.last_index + 1)]
    variations: list[int] = []
    for j in range(len(points) - 1):
        sample = rational_between(points[j], points[j + 1])
        sigma = sign_sequence(data, sample)
        right = [lateral.sign(R, points[j], "right") for R in chain]
        left = [lateral.sign(R, points[j + 1], "left") for R in chain]
        v_right = variation_count([s * t for s, t in zip(sigma, right)])
        v_left = variation_count([s * t for s, t in zip(sigma, left)])
        variations.append(v_right - v_left)

    positive = negative = 0
    for r in roots:
        if oracle.sign(F, r) == 0:
            gs = oracle.sign(G, r)
            if gs > 0:
                positive += 1
            elif gs < 0:
                negative += 1
    value = positive - negative + sum(variations)
    return TarskiQueryResult(
        value=value,
        partition=tuple(roots),
        interval_variations=tuple(variations),
        positive_zeros=positive,
        negative_zeros=negative,
        endpoint_zeros=_endpoint_zeros(F, interval, oracle),
    )


def _check_domain(interval: RealInterval, spec: PfaffianSpec) -> None:
    domain = getattr(spec, "domain", None)
    if domain is None:
        return
    if compare(interval.lo, domain.lo) < 0 or compare(interval.hi, domain.hi) > 0:
        raise InputError("query interval leaves the function domain")


def _endpoint_zeros(F: BiPoly, interval: RealInterval, oracle: SignOracle) -> tuple[bool, bool]:
    lo_zero = not isinstance(interval.lo, Infinity) and oracle.sign(F, interval.lo) == 0
    hi_zero = not isinstance(interval.hi, Infinity) and oracle.sign(F, interval.hi) == 0
    return (lo_zero, hi_zero)


def _pure_polynomial_query(
    F: BiPoly, G: BiPoly, interval: RealInterval, oracle: SignOracle
) -> TarskiQueryResult:
    f = F.row(0)
    roots: list[AlgebraicNumber] = []
    if f.degree >= 1:
        for r in isolate_roots_lazy(f):
            if compare(r, interval.lo) > 0 and compare(r, interval.hi) < 0:
                roots.append(r)
    positive = negative = 0
    for r in roots:
        gs = sign_at(G.row(0), r) if G.deg_y == 0 else oracle.sign(G, r)
        if gs > 0:
            positive += 1
        elif gs < 0:
            negative += 1
    value = positive - negative
    lo_zero = not isinstance(interval.lo, Infinity) and sign_at(f, interval.lo) == 0
    hi_zero = not isinstance(interval.hi, Infinity) and sign_at(f, interval.hi) == 0
    return TarskiQueryResult(
        value=value,
        partition=tuple(roots),
        interval_variations=(),
        positive_zeros=positive,
        negative_zeros=negative,
        endpoint_zeros=(lo_zero, hi_zero),
    )


# ---------------------------------------------------------------------------
# feasible sign conditions


def zero_count_bound(F: BiPoly, spec: PfaffianSpec) -> int:
    """Bound on the number of zeros of F(x, phi(x)) over the whole line."""
    d = max(1, F.total_degree)
    return (d + 1) * (2 * d * d - d) * ((spec.deg_y + 3) * d + spec.deg_x)


_BASE_QUERY_MATRIX = ((1, 1, 1), (0, 1, -1), (0, 1, 1))  # exponents 0,1,2 vs (=,>,<)
_SIGN_ORDER = (0, 1, -1)  # column order (=, >, <)


def sign_conditions_on_zeroset(
    F: BiPoly,
    Gs: Sequence[BiPoly],
    interval: RealInterval,
    spec: PfaffianSpec,
    oracle: SignOracle,
) -> list[tuple[SignTuple, int]]:
    """Sign tuples of the functions g_i realized on the zero set of f,
    each with the number of zeros realizing it.

    Recursive query solving: step i extends every feasible tuple by the
    three candidate signs of g_i and solves an exact linear system whose
    right-hand sides are queries against products g_1^a_1 ... g_i^a_i with
    exponents in {0, 1, 2}; only rows and columns touching feasible tuples
    are kept, so systems stay at most 3m x 3m for m feasible tuples.
    """
    if F.is_zero:
        raise InputError("the zero set of the zero function is not a finite set")
    original = list(Gs)
    for g in original:
        if g.is_zero:
            raise InputError("sign conditions of the zero function are undefined")
    # process cheap functions first: query products accumulate exponents on
    # the earliest positions, so putting low-degree functions there keeps
    # the queried polynomials small; results are re-indexed at the end
    order = sorted(
        range(len(original)),
        key=lambda i: (original[i].deg_y, original[i].total_degree),
    )
    gs = [original[i] for i in order]
    back = [0] * len(order)
    for slot, i in enumerate(order):
        back[i] = slot

    products: dict[tuple, BiPoly] = {(): BiPoly.ONE}
    queries: dict[tuple, int] = {}

    def product_for(exps: tuple[int, ...]) -> BiPoly:
        if exps not in products:
            head = product_for(exps[:-1])
            products[exps] = head * gs[len(exps) - 1] ** exps[-1]
        return products[exps]

    def query(exps: tuple[int, ...]) -> int:
        key = exps
        while key and key[-1] == 0:
            key = key[:-1]
        if key not in queries:
            queries[key] = tarski_query(F, product_for(key), interval, spec, oracle).value
        return queries[key]

    total = query(())
    bound = zero_count_bound(F, spec)
    if not 0 <= total <= bound:
        raise InternalError("zero count outside its a priori bound")
    if total == 0:
        return []

    feasible: list[SignTuple] = [()]
    counts: list[int] = [total]
    adapted: list[tuple[int, ...]] = [()]
    matrix: list[list[Fraction]] = [[Fraction(1)]]

    for index in range(len(gs)):
        cands = [s + (sg,) for s in feasible for sg in _SIGN_ORDER]
        rows = [a + (e,) for a in adapted for e in (0, 1, 2)]
        big = [
            [
                matrix[ai][si] * _BASE_QUERY_MATRIX[e][sgi]
                for si in range(len(feasible))
                for sgi in range(3)
            ]
            for ai in range(len(adapted))
            for e in range(3)
        ]
        rhs = [query(r) for r in rows]
        solution = solve_linear(big, rhs)
        kept_cols = []
        new_feasible: list[SignTuple] = []
        new_counts: list[int] = []
        for col, (cand, c) in enumerate(zip(cands, solution)):
            if c == 0:
                continue
            if c.denominator != 1 or c < 0:
                raise InternalError("sign-condition counts must be nonnegative integers")
            kept_cols.append(col)
            new_feasible.append(cand)
            new_counts.append(int(c))
        if sum(new_counts) != total:
            raise InternalError("sign-condition counts do not add up to the zero count")
        # prefer adapted rows with small query products for the next step
        by_cost = sorted(
            range(len(rows)),
            key=lambda r: sum(e * (1 + gs[i].total_degree) for i, e in enumerate(rows[r])),
        )
        restricted = [[big[r][c] for c in kept_cols] for r in by_cost]
        selected = independent_row_indices(restricted, len(kept_cols))
        feasible = new_feasible
        counts = new_counts
        adapted = [rows[by_cost[r]] for r in selected]
        matrix = [restricted[r] for r in selected]

    return [
        (tuple(signs[back[i]] for i in range(len(signs))), count)
        for signs, count in zip(feasible, counts)
    ]


@dataclass(frozen=True)
class SignConditionRecord:
    """A feasible sign tuple with the evidence that produced it."""

    signs: SignTuple
    source: str  # "zero-set" | "critical-point" | "endpoint"
    detail: str
    count: int | None = None


def all_sign_conditions(
    Gs: Sequence[BiPoly],
    interval: RealInterval,
    spec: PfaffianSpec,
    oracle: SignOracle,
) -> list[SignConditionRecord]:
    """Every sign tuple of the g_i realized on the closed interval.

    Tuples with some g_i = 0 come from the zero set of that g_i (this scan
    is redundant across i but kept for faithfulness to the recursive scheme;
    duplicates are merged at the end).  All-strict tuples are constant
    between consecutive zeros of the product of the g_i and are therefore
    realized at a critical point of the product or next to an endpoint.
    """
    gs = list(Gs)
    if not gs:
        raise InputError("at least one function is required")
    for g in gs:
        if g.is_zero:
            raise InputError("sign conditions of the zero function are undefined")
    _check_domain(interval, spec)

    found: dict[SignTuple, SignConditionRecord] = {}

    def add(record: SignConditionRecord) -> None:
        found.setdefault(record.signs, record)

    bound = 2
    for j, g in enumerate(gs):
        if g.is_constant:
            continue
        bound += zero_count_bound(g, spec)
        others = gs[:j] + gs[j + 1 :]
        for tpl, count in sign_conditions_on_zeroset(g, others, interval, spec, oracle):
            full = tpl[:j] + (0,) + tpl[j:]
            add(SignConditionRecord(full, "zero-set", f"g{j + 1} = 0", count))

    product = BiPoly.ONE
    for g in gs:
        product = product * g
    critical = derivative_poly(product, spec)
    if not critical.is_zero:
        bound += zero_count_bound(critical, spec)
        for tpl, count in sign_conditions_on_zeroset(critical, gs, interval, spec, oracle):
            add(SignConditionRecord(tpl, "critical-point", "(g1*...*gs)' = 0", count))

    for which, end in (("lower endpoint", interval.lo), ("upper endpoint", interval.hi)):
        signs = tuple(_function_sign_at(g, end, oracle) for g in gs)
        add(SignConditionRecord(signs, "endpoint", which))

    out = list(found.values())
    if len(out) > bound:
        raise InternalError("more sign conditions than the zero-count bounds allow")
    return out


def _function_sign_at(g: BiPoly, point: Point, oracle: SignOracle) -> int:
    if not isinstance(point, Infinity) and g.deg_y == 0:
        return sign_at(g.row(0), point)
    return oracle.sign(g, point)


def decide_exists(
    formula: Formula,
    interval: RealInterval,
    spec: PfaffianSpec,
    oracle: SignOracle,
) -> bool:
    """Truth of "some x in the closed interval satisfies the formula"."""
    polys = formula_polynomials(formula)
    records = all_sign_conditions(polys, interval, spec, oracle)
    keys = [p.key() for p in polys]
    for record in records:
        if evaluate_formula(formula, dict(zip(keys, record.signs))):
            return True
    return False
