"""Exact decision procedures and Thom encodings for exponential polynomials.

The engine decides existential sentences about functions F(x, e^(h(x)))
built from integer polynomials, counts and encodes their real zeros, and
exposes the underlying exact machinery: rational polynomial arithmetic, real
algebraic numbers, bivariate subresultant chains, sign-counting queries and
feasible-sign-condition enumeration.  Everything is exact; numeric interval
refinement is only ever applied to values proved nonzero first.
"""

from .algebraic import (
    NEG_INF,
    POS_INF,
    AlgebraicNumber,
    RealInterval,
    compare,
    isolate_roots,
    order_roots,
    realizable_sign_conditions,
    sign_at,
)
from .eoracle import (
    EPolynomial,
    ExpSignOracle,
    esign_at,
    esign_at_infinity,
    esign_lateral,
)
from .errors import EpolyError, InputError, InternalError, ParseError, PrecisionLimitError
from .formulas import And, Atom, Not, Or
from .parsing import Request, parse_input, to_text
from .pfaffian import (
    PfaffianFunction,
    PfaffianSpec,
    SignOracle,
    derivative_poly,
    lateral_sign,
    multiplicity_bound,
    sign_sequence,
)
from .polys import BiPoly, UniPoly, determinant, interpolate
from .sturmdata import (
    SturmData,
    build_sturm_data,
    separating_polynomial,
    signed_subresultant_sequence,
    subresultant_sequence,
)
from .tarski import (
    SignConditionRecord,
    TarskiQueryResult,
    all_sign_conditions,
    decide_exists,
    sign_conditions_on_zeroset,
    tarski_query,
)
from .thom import (
    EThomEncoding,
    compare_encoded_zeros,
    pder_chain,
    pseudo_degree,
    pseudo_derivative,
    thom_encodings_of_zeros,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
