"""Command-line interface.

One request per invocation, given as a single argument or on stdin.  Results
go to stdout as JSON (``--format structured``, the default) or as a short
human summary (``--format human``).  Exit codes: 0 for any computed result
(including a false decision), 2 for input errors, 3 for internal errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .algebraic import (
    NEG_INF,
    POS_INF,
    AlgebraicNumber,
    Infinity,
    RealInterval,
    compare,
    isolate_roots,
)
from .eoracle import EPolynomial, esign_at, esign_at_infinity
from .errors import EpolyError, InputError, InternalError
from .parsing import Options, Request, format_endpoint, parse_input, to_text
from .polys import BiPoly, UniPoly, format_bipoly, format_poly
from .tarski import (
    all_sign_conditions,
    decide_exists,
    format_sign_tuple,
    tarski_query,
)
from .thom import compare_encoded_zeros, pder_chain, thom_encodings_of_zeros


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="epoly",
        description="Exact decisions and Thom encodings for exponential polynomials "
        "f(x) = F(x, e^(h(x))).",
        epilog='Example: epoly "decide exists x . E - 2 = 0 && x - 1 < 0 ; h = x ; on [0, 2]". '
        "Commands: taq, signconds, decide, thom, compare, roots; also "
        '"gen <command> <count>" to emit random request texts (see --seed). '
        "root(p, k) endpoints use 1-based indices into the ascending real roots of p.",
    )
    parser.add_argument("request", nargs="?", help="request text; read from stdin if omitted")
    parser.add_argument("--format", choices=("structured", "human"), default="structured")
    parser.add_argument("--verbose", action="store_true", help="include derivation details")
    parser.add_argument("--seed", type=int, default=0, help="seed for the gen subcommand")
    parser.add_argument(
        "--max-precision-bits",
        type=int,
        default=4096,
        help="cap for numeric interval escalation (exact zero tests are unaffected)",
    )
    args = parser.parse_args(argv)

    text = args.request if args.request is not None else sys.stdin.read()
    text = text.strip()
    try:
        if text.split(maxsplit=1) and text.split(maxsplit=1)[0] == "gen":
            for line in generate_corpus(text, args.seed):
                print(line)
            return 0
        options = Options(
            format=args.format,
            verbose=args.verbose,
            max_precision_bits=args.max_precision_bits,
        )
        request = parse_input(text, options)
        result = run(request)
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except EpolyError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - never a silent wrong answer
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3
    if request.options.format == "human":
        print(render_human(result))
    else:
        print(json.dumps(result, indent=2))
    return 0


# ---------------------------------------------------------------------------
# request execution


def run(request: Request) -> dict:
    """Execute a validated request and return a JSON-serializable result."""
    handler = {
        "taq": _run_taq,
        "signconds": _run_signconds,
        "decide": _run_decide,
        "thom": _run_thom,
        "compare": _run_compare,
        "roots": _run_roots,
    }[request.command]
    return handler(request)


def _resolve_endpoint(ep) -> "AlgebraicNumber | Infinity":
    kind = ep[0]
    if kind == "num":
        return AlgebraicNumber.rational(ep[1])
    if kind == "inf":
        return POS_INF if ep[1] > 0 else NEG_INF
    poly, index = ep[1], ep[2]
    roots = isolate_roots(poly)
    if index > len(roots):
        raise InputError(
            f"root({format_poly(poly.coeffs, 'x')}, {index}): only {len(roots)} real roots"
        )
    return roots[index - 1]


def _resolve_interval(request: Request) -> RealInterval:
    lo, hi = request.interval
    try:
        return RealInterval(_resolve_endpoint(lo), _resolve_endpoint(hi))
    except InputError:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise InputError(f"bad interval: {exc}") from exc


def _engine(request: Request, F: BiPoly):
    func = EPolynomial(F, request.h)
    return func, func.spec, func.oracle(request.options.max_precision_bits)


def _serialize_point(point) -> object:
    if isinstance(point, Infinity):
        return repr(point)
    return {
        "polynomial": format_poly(point.poly.coeffs, "x"),
        "thom": list(point.thom),
        "interval": [_frac_str(point.lo), _frac_str(point.hi)],
    }


def _frac_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _run_taq(request: Request) -> dict:
    _, spec, oracle = _engine(request, request.f)
    result = tarski_query(request.f, request.g, _resolve_interval(request), spec, oracle)
    out = {
        "command": "taq",
        "taq": result.value,
        "partition": [_serialize_point(p) for p in result.partition],
        "interval_variations": list(result.interval_variations),
        "zeros_with_g_positive_at_partition": result.positive_zeros,
        "zeros_with_g_negative_at_partition": result.negative_zeros,
        "f_vanishes_at_endpoints": list(result.endpoint_zeros),
    }
    return out


def _run_signconds(request: Request) -> dict:
    _, spec, oracle = _engine(request, request.gs[0])
    records = all_sign_conditions(request.gs, _resolve_interval(request), spec, oracle)
    return {
        "command": "signconds",
        "functions": [format_bipoly(g) for g in request.gs],
        "sign_conditions": [
            {
                "signs": format_sign_tuple(r.signs),
                "sign_values": list(r.signs),
                "source": r.source,
                "detail": r.detail,
                "count": r.count,
            }
            for r in records
        ],
    }


def _run_decide(request: Request) -> dict:
    from .formulas import formula_polynomials

    polys = formula_polynomials(request.formula)
    _, spec, oracle = _engine(request, polys[0])
    value = decide_exists(request.formula, _resolve_interval(request), spec, oracle)
    out = {"command": "decide", "result": bool(value)}
    if request.options.verbose:
        records = all_sign_conditions(polys, _resolve_interval(request), spec, oracle)
        out["sign_conditions"] = [format_sign_tuple(r.signs) for r in records]
        out["functions"] = [format_bipoly(g) for g in polys]
    return out


def _run_thom(request: Request) -> dict:
    func, _, _ = _engine(request, request.f)
    chain, depth = pder_chain(func)
    encodings = thom_encodings_of_zeros(func, request.options.max_precision_bits)
    enclosures = _zero_enclosures(func, len(encodings))
    return {
        "command": "thom",
        "function": format_bipoly(request.f),
        "pseudo_derivative_chain": [format_bipoly(g.F) for g in chain[1:]],
        "D": depth,
        "zero_count": len(encodings),
        "encodings": [list(e.signs) for e in encodings],
        "zero_enclosures": enclosures,
    }


def _run_compare(request: Request) -> dict:
    func, _, _ = _engine(request, request.f)
    encodings = thom_encodings_of_zeros(func, request.options.max_precision_bits)
    i, j = request.zero_pair
    if i > len(encodings) or j > len(encodings):
        raise InputError(f"the function has {len(encodings)} real zeros")
    c = compare_encoded_zeros(encodings[i - 1], encodings[j - 1])
    return {
        "command": "compare",
        "zero_count": len(encodings),
        "pair": [i, j],
        "relation": "<" if c < 0 else (">" if c > 0 else "="),
        "encodings": [list(encodings[i - 1].signs), list(encodings[j - 1].signs)],
    }


def _run_roots(request: Request) -> dict:
    poly = request.f.row(0)
    roots = isolate_roots(poly)
    if request.interval is not None:
        window = _resolve_interval(request)
        roots = [
            r
            for r in roots
            if compare(r, window.lo) > 0 and compare(r, window.hi) < 0
        ]
    return {
        "command": "roots",
        "polynomial": format_poly(poly.coeffs, "x"),
        "count": len(roots),
        "roots": [_serialize_point(r) for r in roots],
    }


def _zero_enclosures(func: EPolynomial, count: int) -> list:
    """Best-effort rational enclosures of the zeros, for display only.

    Sign changes of f at exact rational sample points are bracketed by
    bisection; if that does not separate exactly ``count`` zeros (e.g. for
    tangential zeros), nulls are reported instead.
    """
    if count == 0:
        return []
    sign_of = lambda r: esign_at(func.F, func.h, AlgebraicNumber.rational(r))
    left_sign = esign_at_infinity(func.F, func.h, NEG_INF)
    bound = 1
    for _ in range(24):
        if sign_of(Fraction(-bound)) == left_sign:
            break
        bound *= 2
    else:
        return [None] * count
    lo = Fraction(-bound)
    brackets: list[tuple[Fraction, Fraction]] = []
    hi = max(bound, 1)
    # scan right in halving steps until the expected number of sign changes
    for _ in range(24):
        brackets = _sign_change_brackets(sign_of, lo, Fraction(hi), count)
        if brackets is not None and len(brackets) == count:
            break
        hi *= 2
    if brackets is None or len(brackets) != count:
        return [None] * count
    refined = []
    for a, b in brackets:
        for _ in range(20):
            mid = (a + b) / 2
            s = sign_of(mid)
            if s == 0:
                a = b = mid
                break
            if s == sign_of(a):
                a = mid
            else:
                b = mid
        refined.append([_frac_str(a), _frac_str(b)])
    return refined


def _sign_change_brackets(sign_of, lo: Fraction, hi: Fraction, want: int):
    # subdivide until the number of sign changes stabilizes at `want`
    points = [lo, hi]
    for _ in range(12):
        signs = [sign_of(p) for p in points]
        if any(s == 0 for s in signs):
            # nudge exact-zero sample points
            points = [p + Fraction(1, 997) if sign_of(p) == 0 else p for p in points]
            continue
        changes = [
            (points[i], points[i + 1])
            for i in range(len(points) - 1)
            if signs[i] != signs[i + 1]
        ]
        if len(changes) == want:
            return changes
        if len(changes) > want:
            return None
        points = sorted(set(points) | {(points[i] + points[i + 1]) / 2 for i in range(len(points) - 1)})
        if len(points) > 4096:
            return None
    return None


# ---------------------------------------------------------------------------
# human rendering and corpus generation


def render_human(result: dict) -> str:
    lines: list[str] = []
    command = result.get("command")
    if command == "taq":
        lines.append(f"taq = {result['taq']}")
        lines.append(f"partition points: {len(result['partition'])}")
        for p in result["partition"]:
            lines.append(f"  root of {p['polynomial']} in [{p['interval'][0]}, {p['interval'][1]}]")
        lines.append(f"interval variation counts: {result['interval_variations']}")
        if any(result["f_vanishes_at_endpoints"]):
            lines.append("note: f vanishes at an endpoint (excluded from the open-interval count)")
    elif command == "signconds":
        lines.append(f"functions: {', '.join(result['functions'])}")
        lines.append(f"{len(result['sign_conditions'])} feasible sign conditions:")
        for r in result["sign_conditions"]:
            count = "" if r["count"] is None else f" x{r['count']}"
            lines.append(f"  {r['signs']}  [{r['source']}: {r['detail']}{count}]")
    elif command == "decide":
        lines.append("result = " + ("true" if result["result"] else "false"))
    elif command == "thom":
        lines.append(f"function: {result['function']}")
        lines.append(f"pseudo-derivative chain (D = {result['D']}):")
        for i, g in enumerate(result["pseudo_derivative_chain"], 1):
            lines.append(f"  pder^{i} = {g}")
        lines.append(f"real zeros: {result['zero_count']}")
        for e, enc in zip(result["encodings"], result["zero_enclosures"]):
            where = "" if enc is None else f"   in [{enc[0]}, {enc[1]}]"
            lines.append(f"  encoding {tuple(e)}{where}")
    elif command == "compare":
        i, j = result["pair"]
        lines.append(f"zero {i} {result['relation']} zero {j}")
    elif command == "roots":
        lines.append(f"{result['count']} real roots of {result['polynomial']}")
        for p in result["roots"]:
            lines.append(f"  in [{p['interval'][0]}, {p['interval'][1]}], thom {tuple(p['thom'])}")
    else:  # pragma: no cover
        lines.append(json.dumps(result))
    return "\n".join(lines)


def generate_corpus(text: str, seed: int) -> list[str]:
    """gen <command> <count>: random well-formed request texts."""
    parts = text.split()
    if len(parts) != 3 or parts[1] not in ("taq", "decide", "signconds") or not parts[2].isdigit():
        raise InputError("usage: gen taq|decide|signconds <count>")
    kind, count = parts[1], int(parts[2])
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(_random_request(kind, rng))
    return out


def _random_poly_text(rng: random.Random, max_deg: int = 2, coeff: int = 5, with_e: bool = True) -> str:
    terms = []
    for j in range(rng.randint(1 if with_e else 0, max_deg) if with_e else 0, -1, -1):
        k = rng.randint(0, max_deg)
        c = rng.randint(-coeff, coeff)
        if c == 0:
            continue
        piece = str(c)
        if k:
            piece += f"*x^{k}" if k > 1 else "*x"
        if j:
            piece += f"*E^{j}" if j > 1 else "*E"
        terms.append(piece)
    if not terms:
        terms = ["1*E"] if with_e else ["1"]
    return " + ".join(terms)


def _random_request(kind: str, rng: random.Random) -> str:
    h = rng.choice(["x", "2*x", "x^2", "x^2 - x"])
    lo, hi = sorted(rng.sample(range(-3, 4), 2))
    if kind == "taq":
        return (
            f"taq F = {_random_poly_text(rng)} ; G = {_random_poly_text(rng)} ; "
            f"h = {h} ; on [{lo}, {hi}]"
        )
    if kind == "signconds":
        gs = ", ".join(_random_poly_text(rng) for _ in range(rng.randint(1, 3)))
        return f"signconds {gs} ; h = {h} ; on [{lo}, {hi}]"
    rel = rng.choice(["< 0", "= 0", "> 0", "<= 0", ">= 0", "!= 0"])
    rel2 = rng.choice(["< 0", "> 0"])
    conn = rng.choice(["&&", "||"])
    return (
        f"decide exists x . {_random_poly_text(rng)} {rel} {conn} "
        f"{_random_poly_text(rng)} {rel2} ; h = {h} ; on [{lo}, {hi}]"
    )


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
