"""Thom encodings for the real zeros of an exponential polynomial.

Successive derivatives of f(x) = F(x, e^(h(x))) never leave the class, but
their defining polynomials keep growing in X.  The pseudo-derivative repairs
this: when the Y-free part of F is constant, the derivative is divided by
the largest power of e^(h(x)) it carries (a positive factor, so all signs
survive).  Under this operation the degree pair (deg_Y, deg of the Y-free
part) drops lexicographically, the chain of iterated pseudo-derivatives is
finite, and the sign vector of the chain at a zero of f pins that zero down
uniquely, exactly as derivative sign vectors do for roots of ordinary
polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .algebraic import RealInterval, compare_sign_vectors
from .eoracle import DEFAULT_MAX_PRECISION_BITS, EPolynomial
from .errors import InputError, InternalError
from .pfaffian import derivative_poly
from .polys import BiPoly, sign
from .tarski import sign_conditions_on_zeroset


def pseudo_degree(f: EPolynomial) -> tuple[int, int]:
    """(deg_Y F, deg F(X, 0)), with 0 in the second slot for zero Y-free part."""
    free = f.F.row(0)
    return (f.F.deg_y, free.degree if not free.is_zero and free.degree > 0 else 0)


def pseudo_derivative(f: EPolynomial) -> EPolynomial | None:
    """Derivative of f, normalized by the e^(k h(x)) factor it may carry.

    Returns None for the zero function (i.e. when f is constant).  The
    normalization divides by a positive function, so the result has the same
    sign as f' everywhere.  Coefficients are kept exactly as the derivative
    produces them (integral whenever f is integral).
    """
    derived = derivative_poly(f.F, f.spec)
    if derived.is_zero:
        return None
    free = f.F.row(0)
    if free.degree <= 0:
        derived = derived.y_shift_down(derived.y_valuation)
    return EPolynomial(derived, f.h)


def pder_chain(f: EPolynomial) -> tuple[list[EPolynomial], int]:
    """The chain f, pder(f), ..., pder^(D)(f) with pder^(D+1) = 0.

    The input must genuinely involve the exponential (deg_Y >= 1); chain
    members may be ordinary polynomials.
    """
    if f.F.deg_y < 1:
        raise InputError("the function must involve the exponential")
    chain = [f]
    degrees = [pseudo_degree(f)]
    while True:
        nxt = pseudo_derivative(chain[-1])
        if nxt is None:
            break
        chain.append(nxt)
        degrees.append(pseudo_degree(nxt))
        if degrees[-1] >= degrees[-2]:
            raise InternalError("pseudo-degree failed to decrease")
    return chain, len(chain) - 1


@dataclass(frozen=True)
class EThomEncoding:
    """Sign vector of the pseudo-derivative chain at one zero of f.

    ``signs[0]`` is always 0 (the function itself vanishes there);
    ``signs[i]`` is the sign of the i-th pseudo-derivative at the zero.
    """

    function: EPolynomial
    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or self.signs[0] != 0:
            raise InputError("an encoding starts with the sign 0 of f itself")


def thom_encodings_of_zeros(
    f: EPolynomial, max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS
) -> list[EThomEncoding]:
    """One encoding per real zero of f, in ascending order of the zeros.

    Computed as the feasible sign conditions of the pseudo-derivative chain
    over the zero set of f on the whole line; each condition is realized by
    exactly one zero.
    """
    if f.F.deg_y < 1:
        raise InputError("the function must involve the exponential")
    chain, _ = pder_chain(f)
    oracle = f.oracle(max_precision_bits)
    # constant chain members have one sign everywhere; query only the rest
    fixed: dict[int, int] = {}
    queried: list[int] = []
    for i, g in enumerate(chain[1:], start=1):
        if g.F.is_constant:
            fixed[i] = sign(g.F.row(0).coefficient(0))
        else:
            queried.append(i)
    conditions = sign_conditions_on_zeroset(
        f.F,
        [chain[i].F for i in queried],
        RealInterval.full_line(),
        f.spec,
        oracle,
    )
    encodings = []
    for signs, count in conditions:
        if count != 1:
            raise InternalError("a chain sign condition selected more than one zero")
        by_index = dict(zip(queried, signs))
        by_index.update(fixed)
        full = (0,) + tuple(by_index[i] for i in range(1, len(chain)))
        encodings.append(EThomEncoding(f, full))
    encodings.sort(key=cmp_to_key(compare_encoded_zeros))
    return encodings


def compare_encoded_zeros(e1: EThomEncoding, e2: EThomEncoding) -> int:
    """Order the encoded zeros: -1, 0 or +1 as the first is below, equal
    to, or above the second.  Both encodings must come from the same f."""
    if e1.function != e2.function:
        raise InputError("encodings of different functions are not comparable")
    if len(e1.signs) != len(e2.signs):
        raise InternalError("encodings of one function with different chain lengths")
    return compare_sign_vectors(e1.signs, e2.signs)
