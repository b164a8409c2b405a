"""Bivariate subresultants and the comparison-chain data for zero counting.

Subresultants of P, Q in Z[X][Y] are computed exactly as determinant
polynomials of Sylvester submatrices, by specializing X at integer nodes,
evaluating the scalar determinants, and interpolating each coefficient.  Two
orientations are provided:

* :func:`subresultant_sequence` uses the plain Sylvester row order (the
  classical determinant definition, with SRes_0 the resultant);
* :func:`signed_subresultant_sequence` flips each SRes_j by
  (-1)**(m*(m-1)/2) with m the number of matrix rows, which is the
  orientation under which the remainder-chain identities

      eps * tau_0**delta * R_{-1} = C_0 * R_0 + R_1
      rho_{i+2} * tau_{i+1} * R_i = C_{i+1} * R_{i+1} - rho_{i+1} * tau_i * R_{i+2}

  hold (tau_i the leading Y-coefficients of the chain, rho_i the principal
  subresultant coefficients at the chain degrees, delta the initial degree
  gap plus one and eps = (-1)**(delta*(delta-1)/2)).  The rho_i are taken
  from the plain orientation: the identities only ever involve products of
  consecutive rho's, so any constant flip of all of them is immaterial, and
  the plain choice is the one consistent with the oriented chain above.

:func:`build_sturm_data` assembles the chain R_{-1} = F'G, R_0 = F,
R_{i+1} = SRes_{deg R_i - 1} together with all the bookkeeping needed to
turn it into sign-counting sequences on root-free intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InternalError
from .pfaffian import PfaffianSpec, derivative_poly
from .polys import BiPoly, UniPoly, interpolate

# ---------------------------------------------------------------------------
# determinant-polynomial subresultants


def subresultant_sequence(P: BiPoly, Q: BiPoly) -> list[BiPoly]:
    """All subresultants SRes_j(P, Q), 0 <= j <= deg_Y Q, plain orientation."""
    return _subresultants(P, Q, signed=False)


def signed_subresultant_sequence(P: BiPoly, Q: BiPoly) -> list[BiPoly]:
    """Subresultants oriented for the remainder-chain identities."""
    return _subresultants(P, Q, signed=True)


def _subresultants(P: BiPoly, Q: BiPoly, signed: bool) -> list[BiPoly]:
    if P.is_zero or Q.is_zero:
        raise InputError("subresultants of a zero polynomial")
    p, q = P.deg_y, Q.deg_y
    if not p > q >= 0:
        raise InputError("subresultants require deg_Y(P) > deg_Y(Q) >= 0")
    dX, dx = max(P.deg_x, 0), max(Q.deg_x, 0)
    out: list[BiPoly] = []
    for j in range(q + 1):
        # coefficient degree bound from the matrix shape: q-j rows of P
        # coefficients and p-j rows of Q coefficients
        bound = (q - j) * dX + (p - j) * dx
        nodes = range(bound + 1)
        columns: list[list[Fraction]] = [[] for _ in range(j + 1)]
        for node in nodes:
            values = _detpol_at_node(P, Q, p, q, j, node)
            for k in range(j + 1):
                columns[k].append(values[k])
        rows = [
            interpolate(list(zip(nodes, columns[k]))) if bound > 0 else UniPoly.constant(columns[k][0])
            for k in range(j + 1)
        ]
        sres = BiPoly.of(rows)
        if signed:
            m = p + q - 2 * j
            if (m * (m - 1) // 2) % 2:
                sres = -sres
        out.append(sres)
    return out


def _detpol_at_node(P: BiPoly, Q: BiPoly, p: int, q: int, j: int, node: int) -> list[Fraction]:
    """Coefficients (Y^0 .. Y^j) of the determinant polynomial at X = node."""
    pc = _int_coeffs_at(P, p, node)
    qc = _int_coeffs_at(Q, q, node)
    m = p + q - 2 * j
    n = p + q - j
    matrix: list[list[int]] = []
    for s in range(q - j - 1, -1, -1):  # rows Y^s * P, descending shifts
        matrix.append(_shift_row(pc, s, n))
    for s in range(p - j - 1, -1, -1):  # rows Y^s * Q
        matrix.append(_shift_row(qc, s, n))
    dets = _minor_row(matrix, m, n)
    if dets is None:
        return [Fraction(0)] * (j + 1)
    # dets[c - (m-1)] is det of columns (0..m-2, c); column c holds Y^(n-1-c)
    return [Fraction(dets[(n - 1 - k) - (m - 1)]) for k in range(j + 1)]


def _int_coeffs_at(R: BiPoly, formal_deg: int, node: int) -> list[int]:
    """Values of the Y-coefficients at X = node, padded to the formal degree."""
    vals = []
    for jj in range(formal_deg + 1):
        v = R.row(jj)(node)
        if v.denominator != 1:
            raise InputError("subresultants expect integer-coefficient input")
        vals.append(int(v))
    return vals


def _shift_row(coeffs: list[int], s: int, n: int) -> list[int]:
    # entry for column c is the Y^(n-1-c) coefficient of Y^s * R
    row = [0] * n
    for i, v in enumerate(coeffs):
        deg = i + s
        row[n - 1 - deg] = v
    return row


def _minor_row(matrix: list[list[int]], m: int, n: int) -> list[int] | None:
    """Bordered minors det(cols 0..m-2, c) for c = m-1..n-1, or None if the
    first m-1 columns are rank deficient (every such minor vanishes)."""
    sgn = 1
    prev = 1
    for k in range(m - 1):
        if matrix[k][k] == 0:
            for i in range(k + 1, m):
                if matrix[i][k] != 0:
                    matrix[k], matrix[i] = matrix[i], matrix[k]
                    sgn = -sgn
                    break
            else:
                return None
        piv = matrix[k][k]
        for i in range(k + 1, m):
            row_i = matrix[i]
            row_k = matrix[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                num = row_i[j] * piv - factor * row_k[j]
                quo, rem = divmod(num, prev)
                if rem:
                    raise InternalError("fraction-free elimination lost exactness")
                row_i[j] = quo
            row_i[k] = 0
        prev = piv
    last = matrix[m - 1]
    return [sgn * last[c] for c in range(m - 1, n)]


# ---------------------------------------------------------------------------
# the chain package


@dataclass(frozen=True)
class SturmData:
    """Signed subresultant chain of F'G and F with its sign bookkeeping.

    ``chain[k]`` is R_(k-1), so the stored sequence runs R_-1, R_0, ..., R_N.
    ``formal_degrees[k]`` is n_(k-1) for k = 0..N+2; ``leading_coeffs[k]`` is
    tau_(k-1) for k = 0..N+1; ``principal_coeffs[k]`` is rho_(k+1) for
    k = 0..N.  Use :meth:`R`, :meth:`n`, :meth:`tau`, :meth:`rho` for access
    in the natural indexing.
    """

    chain: tuple[BiPoly, ...]
    formal_degrees: tuple[int, ...]
    leading_coeffs: tuple[UniPoly, ...]
    principal_coeffs: tuple[UniPoly, ...]
    last_index: int
    gap_exponent: int
    gap_sign: int

    def R(self, i: int) -> BiPoly:
        if not -1 <= i <= self.last_index:
            raise InputError("chain index out of range")
        return self.chain[i + 1]

    def n(self, i: int) -> int:
        if not -1 <= i <= self.last_index + 1:
            raise InputError("degree index out of range")
        return self.formal_degrees[i + 1]

    def tau(self, i: int) -> UniPoly:
        if not -1 <= i <= self.last_index:
            raise InputError("leading-coefficient index out of range")
        return self.leading_coeffs[i + 1]

    def rho(self, i: int) -> UniPoly:
        if not 1 <= i <= self.last_index + 1:
            raise InputError("principal-coefficient index out of range")
        return self.principal_coeffs[i - 1]


def build_sturm_data(F: BiPoly, G: BiPoly, spec: PfaffianSpec) -> SturmData:
    """Chain data for counting zeros of F(x, phi) weighted by the sign of G.

    Requires positive Y-degrees for F, G and the differential rule, and the
    degree relation deg_Y(F'G) > deg_Y(F); under the standing assumptions on
    the function class this always holds, so a violation is reported rather
    than silently repaired.
    """
    if F.deg_y <= 0:
        raise InputError("deg_Y(F) must be positive")
    if G.deg_y <= 0:
        raise InputError("deg_Y(G) must be positive")
    Ft = derivative_poly(F, spec)
    head = Ft * G
    if head.is_zero or head.deg_y <= F.deg_y:
        raise InputError("degree assumption deg_Y(F'G) > deg_Y(F) fails")
    plain = subresultant_sequence(head, F)
    principal_by_index = [plain[j].row(j) for j in range(F.deg_y + 1)]
    p, q = head.deg_y, F.deg_y

    def oriented(j: int) -> BiPoly:
        m = p + q - 2 * j
        return -plain[j] if (m * (m - 1) // 2) % 2 else plain[j]

    chain: list[BiPoly] = [head, F]
    while True:
        current = chain[-1]
        d = current.deg_y
        if d == 0:
            break
        nxt = oriented(d - 1)
        if nxt.is_zero:
            break
        chain.append(nxt)
    last = len(chain) - 2

    degrees = [head.deg_y + 1, head.deg_y]
    degrees += [chain[k].deg_y for k in range(1, len(chain))]
    leading = tuple(c.leading_row for c in chain)
    principal = tuple(principal_by_index[degrees[i + 1]] for i in range(1, last + 2))
    delta = head.deg_y - F.deg_y + 1
    eps = -1 if (delta * (delta - 1) // 2) % 2 else 1
    data = SturmData(
        chain=tuple(chain),
        formal_degrees=tuple(degrees),
        leading_coeffs=leading,
        principal_coeffs=principal,
        last_index=last,
        gap_exponent=delta,
        gap_sign=eps,
    )
    for i in range(-1, last + 1):
        if data.tau(i).is_zero:
            raise InternalError("nonzero chain element with zero leading coefficient")
    return data


def separating_polynomial(data: SturmData) -> UniPoly:
    """Product of all leading and principal chain coefficients.

    Its roots cut the line into intervals on which every chain coefficient
    keeps a constant sign.  Identically-zero factors (which do not occur for
    well-formed chains) would annihilate the product and are skipped.
    """
    out = UniPoly.ONE
    for i in range(-1, data.last_index + 1):
        factor = data.tau(i)
        if not factor.is_zero:
            out = out * factor
    for i in range(1, data.last_index + 2):
        factor = data.rho(i)
        if not factor.is_zero:
            out = out * factor
    return out
