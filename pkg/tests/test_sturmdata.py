"""Subresultant sequences and the zero-counting chain package."""

import random

import pytest

from epoly.errors import InputError
from epoly.pfaffian import PfaffianSpec, derivative_poly
from epoly.polys import BiPoly, UniPoly
from epoly.sturmdata import (
    build_sturm_data,
    separating_polynomial,
    signed_subresultant_sequence,
    subresultant_sequence,
)

from oracles import (
    prem_bipoly,
    prem_chain,
    proportional_over_rational_functions,
    sympy_subresultants,
    sympy_to_bipoly,
)


def U(*coeffs):
    return UniPoly.of(coeffs)


Y = BiPoly.y()
X = BiPoly.x()
ONE = BiPoly.ONE


def test_resultant_of_parabola_and_tangent_line():
    # P = Y^2 - X, Q = 2Y
    s = subresultant_sequence(Y * Y - X, 2 * Y)
    assert s[0] == BiPoly.from_x(U(0, -4))  # -4X
    # P = Y^2 - X, Q = Y - 1
    s = subresultant_sequence(Y * Y - X, Y - ONE)
    assert s[0] == BiPoly.from_x(U(1, -1))  # 1 - X


def test_resultant_vanishes_for_exact_division():
    P = (Y - ONE) * (Y - X)
    s = subresultant_sequence(P, Y - ONE)
    assert s[0].is_zero


def test_subresultant_requires_degree_drop():
    with pytest.raises(InputError):
        subresultant_sequence(Y - ONE, Y + ONE)


def _spec_exp():
    return PfaffianSpec(Y)  # phi' = phi


def test_chain_for_exponential_shifted_by_two():
    # F = Y - 2, G = Y with phi' = phi: F' G = Y^2, chain ends constant
    data = build_sturm_data(Y - BiPoly.constant(2), Y, _spec_exp())
    assert data.R(-1) == Y * Y
    assert data.R(0) == Y - BiPoly.constant(2)
    assert data.last_index == 1
    assert data.R(1).deg_y == 0
    assert data.gap_exponent == 2 and data.gap_sign == -1


def test_chain_structure_identities_hold_exactly():
    data = build_sturm_data(Y * Y - X, Y, _spec_exp())
    _assert_structure_identities(data)


def _assert_structure_identities(data):
    t0 = data.tau(0)
    lhs = data.gap_sign * BiPoly.from_x(t0**data.gap_exponent) * data.R(-1)
    first = lhs - (data.R(1) if data.last_index >= 1 else BiPoly.ZERO)
    assert prem_bipoly(first, data.R(0)).is_zero
    for i in range(0, data.last_index):
        nxt = data.R(i + 2) if i + 2 <= data.last_index else BiPoly.ZERO
        combo = (
            BiPoly.from_x(data.rho(i + 2) * data.tau(i + 1)) * data.R(i)
            + BiPoly.from_x(data.rho(i + 1) * data.tau(i)) * nxt
        )
        assert prem_bipoly(combo, data.R(i + 1)).is_zero


def test_chain_rejects_y_free_weight():
    with pytest.raises(InputError):
        build_sturm_data(Y - BiPoly.constant(2), ONE, _spec_exp())


def test_separating_polynomial_constant_when_coefficients_are():
    data = build_sturm_data(Y - BiPoly.constant(2), Y, _spec_exp())
    L = separating_polynomial(data)
    assert L.degree == 0


def test_separating_polynomial_is_the_literal_product():
    data = build_sturm_data(Y * Y - X, Y, _spec_exp())
    expected = UniPoly.ONE
    for i in range(-1, data.last_index + 1):
        expected = expected * data.tau(i)
    for i in range(1, data.last_index + 2):
        expected = expected * data.rho(i)
    assert separating_polynomial(data) == expected


def _rand_unipoly(rng, deg, cmax):
    return UniPoly.of([rng.randint(-cmax, cmax) for _ in range(deg + 1)])


def _rand_bipoly(rng, dx, dy, cmax, min_y=1):
    while True:
        rows = [_rand_unipoly(rng, rng.randint(0, dx), cmax) for _ in range(dy + 1)]
        b = BiPoly.of(rows)
        if not b.is_zero and b.deg_y >= min_y:
            return b


def test_cross_method_agreement_with_pseudo_remainders():
    # Positive-Y-degree chain elements: determinant subresultants match the
    # primitive pseudo-remainder chain up to sign once contents are removed
    # (so the principal coefficients have identical X-root sets).  The
    # degree-0 tail is compared as an exact resultant against sympy.
    import sympy

    from oracles import bipoly_to_sympy, squarefree_sets_equal

    rng = random.Random(21)
    done = 0
    while done < 100:
        P = _rand_bipoly(rng, 2, rng.randint(2, 4), 4, min_y=2)
        Q = _rand_bipoly(rng, 2, rng.randint(1, P.deg_y - 1), 4)
        if not P.deg_y > Q.deg_y >= 1:
            continue
        done += 1
        sres = subresultant_sequence(P, Q)
        resultant = sympy.resultant(bipoly_to_sympy(P), bipoly_to_sympy(Q), sympy.Symbol("y"))
        assert bipoly_to_sympy(sres[0]).expand() == sympy.expand(resultant)
        for element in prem_chain(P, Q)[2:]:
            k = element.deg_y
            if k == 0:
                continue
            partner = sres[k]
            assert not partner.is_zero
            assert proportional_over_rational_functions(element, partner)
            # stripping contents removes exactly the structure-theorem
            # factors (tau/rho powers); what remains must agree up to sign
            from oracles import bipoly_content_free

            normalized = element.integer_normalized()
            partner_n = bipoly_content_free(partner)
            assert normalized == partner_n or normalized == -partner_n
            assert squarefree_sets_equal(normalized.leading_row, partner_n.row(k))


def test_cross_method_agreement_with_sympy():
    rng = random.Random(22)
    for _ in range(25):
        P = _rand_bipoly(rng, 2, 3, 4)
        Q = _rand_bipoly(rng, 2, rng.randint(1, 2), 4)
        if not P.deg_y > Q.deg_y:
            continue
        sres = subresultant_sequence(P, Q)
        for expr in sympy_subresultants(P, Q)[2:]:
            element = sympy_to_bipoly(expr)
            if element.is_zero:
                continue
            partner = sres[element.deg_y]
            assert proportional_over_rational_functions(element, partner)


def test_specialization_soundness():
    # evaluating the bivariate subresultants at x0 (away from the roots of
    # the leading coefficients) matches the subresultants of the
    # specialized univariate pair
    rng = random.Random(23)
    done = 0
    while done < 50:
        P = _rand_bipoly(rng, 2, rng.randint(2, 3), 4)
        Q = _rand_bipoly(rng, 2, rng.randint(1, P.deg_y - 1), 4)
        if not P.deg_y > Q.deg_y >= 1:
            continue
        x0 = rng.randint(-6, 6)
        if P.leading_row(x0) == 0 or Q.leading_row(x0) == 0:
            continue
        done += 1
        sres = subresultant_sequence(P, Q)
        Ps = BiPoly.of([UniPoly.constant(v) for v in P.eval_x(x0).coeffs])
        Qs = BiPoly.of([UniPoly.constant(v) for v in Q.eval_x(x0).coeffs])
        specialized = subresultant_sequence(Ps, Qs)
        for j in range(Q.deg_y + 1):
            assert sres[j].eval_x(x0) == specialized[j].eval_x(0)


def test_signed_orientation_differs_by_documented_sign():
    rng = random.Random(24)
    for _ in range(20):
        P = _rand_bipoly(rng, 2, 3, 4)
        Q = _rand_bipoly(rng, 2, rng.randint(1, 2), 4)
        if not P.deg_y > Q.deg_y:
            continue
        plain = subresultant_sequence(P, Q)
        signed = signed_subresultant_sequence(P, Q)
        p, q = P.deg_y, Q.deg_y
        for j in range(q + 1):
            m = p + q - 2 * j
            flip = -1 if (m * (m - 1) // 2) % 2 else 1
            assert signed[j] == flip * plain[j]


def test_random_chains_satisfy_structure_identities():
    rng = random.Random(25)
    done = 0
    while done < 60:
        F = _rand_bipoly(rng, 2, rng.randint(1, 3), 4)
        G = _rand_bipoly(rng, 2, rng.randint(1, 2), 4)
        Phi = _rand_bipoly(rng, 1, rng.randint(1, 2), 3)
        spec = PfaffianSpec(Phi)
        Ft = derivative_poly(F, spec)
        if Ft.is_zero or (Ft * G).deg_y <= F.deg_y:
            continue
        done += 1
        data = build_sturm_data(F, G, spec)
        _assert_structure_identities(data)
        # degree bound on the separating polynomial
        d = max(F.total_degree, G.total_degree, 1)
        bound = (2 * data.last_index + 3) * d * (4 * d + spec.deg_x + spec.deg_y - 1)
        assert separating_polynomial(data).degree <= bound
