"""Functions of one variable built from a fixed order-1 Pfaffian function.

A :class:`PfaffianSpec` fixes an analytic function phi through the rule
phi'(x) = Phi(x, phi(x)) for a bivariate integer polynomial Phi with positive
Y-degree.  Every F in Z[X, Y] then defines the function f(x) = F(x, phi(x)),
and differentiation acts on defining polynomials:

    f'(x) = (dF/dX + dF/dY * Phi)(x, phi(x)).

Sign queries at algebraic points and at the infinities go through the
:class:`SignOracle` protocol; the exponential case has a concrete oracle in
:mod:`epoly.eoracle`, other choices of phi can plug in their own.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Protocol, Sequence

from .errors import InputError, InternalError
from .polys import BiPoly, sign

if TYPE_CHECKING:  # pragma: no cover
    from .algebraic import Point
    from .sturmdata import SturmData


@dataclass(frozen=True)
class PfaffianSpec:
    """The defining differential rule phi' = Phi(x, phi).

    ``domain`` restricts where phi is defined; None means the whole line.
    """

    phi_rule: BiPoly
    domain: "object | None" = None  # RealInterval or None

    def __post_init__(self):
        if self.phi_rule.deg_y <= 0:
            raise InputError("the differential rule must involve the function itself")

    @property
    def deg_x(self) -> int:
        return max(self.phi_rule.deg_x, 0)

    @property
    def deg_y(self) -> int:
        return self.phi_rule.deg_y


@dataclass(frozen=True)
class PfaffianFunction:
    """f(x) = F(x, phi(x)) for a fixed phi."""

    F: BiPoly
    spec: PfaffianSpec

    def __post_init__(self):
        if self.F.is_zero:
            raise InputError("zero polynomial does not define a function")


class SignOracle(Protocol):
    """Exact signs of P(x, phi(x)) at algebraic numbers and infinities.

    This is the one extension point of the engine: implementations must
    return exact values in {-1, 0, +1}.
    """

    def sign(self, P: BiPoly, point: "Point") -> int:  # pragma: no cover
        ...


def derivative_poly(F: BiPoly, spec: PfaffianSpec, order: int = 1) -> BiPoly:
    """Defining polynomial of the order-th derivative of x -> F(x, phi(x))."""
    if order < 0:
        raise InputError("derivative order must be nonnegative")
    out = F
    for _ in range(order):
        out = out.dx() + out.dy() * spec.phi_rule
    return out


def multiplicity_bound(theta: BiPoly, spec: PfaffianSpec) -> int:
    """Upper bound on the multiplicity of any zero of x -> Theta(x, phi(x)).

    2*dx*dy + dx*(ey - 1) + (ex + 1)*dy, where (dx, dy) are the degrees of
    Theta and (ex, ey) those of the differential rule.
    """
    if theta.is_zero:
        raise InputError("zero polynomial")
    dx = max(theta.deg_x, 0)
    dy = max(theta.deg_y, 0)
    ex, ey = spec.deg_x, spec.deg_y
    return 2 * dx * dy + dx * (ey - 1) + (ex + 1) * dy


def _lateral_search_cap(theta: BiPoly, spec: PfaffianSpec) -> int:
    # For dy = 0 the function is an ordinary polynomial in x and the general
    # bound can degenerate to 0 (ey = 1); its own X-degree is the honest cap.
    if theta.deg_y == 0:
        return max(theta.deg_x, 0)
    return multiplicity_bound(theta, spec)


def sign_sequence(data: "SturmData", sample: Fraction) -> list[int]:
    """Signs attached to the comparison chain on one root-free interval.

    ``sample`` must be a rational point of an open interval containing no
    root of any of the chain's leading or principal coefficients; on such an
    interval each of those polynomials has constant sign, so evaluating at
    the sample point is enough.  The first sign is +1, the second is the gap
    sign times the leading-coefficient sign raised to the gap exponent, and
    each later sign multiplies the previous-but-one by the sign of the
    product of the four adjacent chain coefficients.
    """
    taus = data.leading_coeffs  # indices -1 .. N
    rhos = data.principal_coeffs  # indices 1 .. N+1

    def sg(p) -> int:
        s = sign(p(sample))
        if s == 0:
            raise InputError("sample point is a root of a chain coefficient")
        return s

    out = [1]
    if data.last_index >= 1:
        out.append(data.gap_sign * sg(taus[1]) ** data.gap_exponent)
    for i in range(2, data.last_index + 1):
        factor = sg(rhos[i - 1]) * sg(taus[i]) * sg(rhos[i - 2]) * sg(taus[i - 1])
        out.append(factor * out[i - 2])
    return out


def lateral_sign(
    theta: BiPoly,
    spec: PfaffianSpec,
    point: "Point",
    side: str,
    oracle: SignOracle,
) -> int:
    """Sign of x -> Theta(x, phi(x)) immediately left or right of a point.

    At an infinity this is the limit sign.  At a finite point the value's
    sign is returned when nonzero; otherwise successive derivatives are
    queried until one is nonzero at the point.  The search is capped by
    :func:`multiplicity_bound`; exhausting it means the function vanishes
    identically near the point, which violates the precondition.
    """
    from .algebraic import Infinity

    if side not in ("left", "right"):
        raise InputError("side must be 'left' or 'right'")
    if isinstance(point, Infinity):
        return oracle.sign(theta, point)
    s = oracle.sign(theta, point)
    if s != 0:
        return s
    cap = _lateral_search_cap(theta, spec)
    current = theta
    for order in range(1, cap + 1):
        current = derivative_poly(current, spec)
        if current.is_zero:
            break
        s = oracle.sign(current, point)
        if s != 0:
            if side == "right" or order % 2 == 0:
                return s
            return -s
    raise InputError("function vanishes identically near the point")


def variation_count(signs: Sequence[int]) -> int:
    """Number of sign changes, zeros removed."""
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count
