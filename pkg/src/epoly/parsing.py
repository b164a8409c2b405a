"""Surface syntax for requests.

A request is one line of text: a command word followed by semicolon-separated
segments, e.g.

    taq F = E - 2 ; G = 1 ; h = x ; on [0, 2]
    decide exists x . E - 2 = 0 && x - 1 < 0 ; h = x ; on [0, 2]
    thom (6*x-1)*E^2 - (8*x+1)*E - 1 ; h = x
    compare (6*x-1)*E^2 - (8*x+1)*E - 1 ; h = x ; zeros = 1, 3
    signconds E - 2, E ; h = x ; on [0, 2]
    roots x^3 - 3*x ; on [-2, 2]

Polynomial expressions use the variable ``x`` and the symbol ``E`` for
e^(h(x)), with explicit ``*`` products, ``^`` powers, and rational constants
(``/`` divides by a constant only).  Formula atoms compare an expression
against literal 0 with one of ``< = > <= >= !=``; connectives are ``&&``,
``||`` and ``!``.  Interval endpoints are rationals, ``-inf``/``inf``, or
``root(p, k)`` denoting the k-th real root of the pure polynomial p in
ascending order (1-based).

Rational coefficients in function positions are cleared by a positive
integer factor (signs are unaffected); ``h`` itself must have integer
coefficients and positive degree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import InputError, ParseError
from .formulas import And, Atom, Formula, Not, Or
from .polys import BiPoly, UniPoly, format_bipoly, format_poly

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op><=|>=|!=|&&|\|\||[-+*/^()\[\],;=<>!.]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            where = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", where)
        if m.group("num"):
            tokens.append(Token("num", m.group("num"), m.start("num")))
        elif m.group("name"):
            tokens.append(Token("name", m.group("name"), m.start("name")))
        else:
            tokens.append(Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Stream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "end":
            self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            raise ParseError(f"expected {what or text!r}", tok.pos)
        return self.next()

    def fail(self, message: str):
        raise ParseError(message, self.peek().pos)


# ---------------------------------------------------------------------------
# expressions


def _parse_expression(ts: _Stream) -> BiPoly:
    node = _parse_term(ts)
    while True:
        if ts.accept("+"):
            node = node + _parse_term(ts)
        elif ts.accept("-"):
            node = node - _parse_term(ts)
        else:
            return node


def _parse_term(ts: _Stream) -> BiPoly:
    node = _parse_factor(ts)
    while True:
        if ts.accept("*"):
            node = node * _parse_factor(ts)
        elif ts.accept("/"):
            pos = ts.peek().pos
            divisor = _parse_factor(ts)
            if not divisor.is_constant or divisor.is_zero:
                raise ParseError("division is only allowed by a nonzero constant", pos)
            node = node * (1 / divisor.rows[0].coefficient(0))
        else:
            return node


def _parse_factor(ts: _Stream) -> BiPoly:
    if ts.accept("-"):
        return -_parse_factor(ts)
    if ts.accept("+"):
        return _parse_factor(ts)
    node = _parse_atom(ts)
    while ts.accept("^"):
        tok = ts.peek()
        if tok.kind != "num":
            raise ParseError("exponent must be a nonnegative integer", tok.pos)
        ts.next()
        node = node ** int(tok.text)
    return node


def _parse_atom(ts: _Stream) -> BiPoly:
    tok = ts.peek()
    if tok.kind == "num":
        ts.next()
        return BiPoly.constant(int(tok.text))
    if tok.kind == "name":
        if tok.text == "x":
            ts.next()
            return BiPoly.x()
        if tok.text == "E":
            ts.next()
            return BiPoly.y()
        raise ParseError(f"unknown symbol {tok.text!r} (only x and E are variables)", tok.pos)
    if tok.text == "(":
        ts.next()
        node = _parse_expression(ts)
        ts.expect(")")
        return node
    raise ParseError("expected a polynomial term", tok.pos)


def clear_denominators(p: BiPoly) -> BiPoly:
    """Scale by the positive lcm of coefficient denominators (sign-safe)."""
    if p.is_zero:
        return p
    factor = 1
    for row in p.rows:
        for c in row.coeffs:
            factor = lcm(factor, c.denominator)
    return p * factor


def _require_pure(p: BiPoly, what: str, pos: int) -> UniPoly:
    if p.deg_y > 0:
        raise ParseError(f"{what} must not involve E", pos)
    return p.row(0) if not p.is_zero else UniPoly.ZERO


# ---------------------------------------------------------------------------
# formulas


_REL = {"<": (-1,), "=": (0,), ">": (1,), "<=": (-1, 0), ">=": (1, 0), "!=": (-1, 1)}


def _parse_formula(ts: _Stream) -> Formula:
    node = _parse_conjunction(ts)
    parts = [node]
    while ts.accept("||"):
        parts.append(_parse_conjunction(ts))
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _parse_conjunction(ts: _Stream) -> Formula:
    parts = [_parse_negation(ts)]
    while ts.accept("&&"):
        parts.append(_parse_negation(ts))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def _parse_negation(ts: _Stream) -> Formula:
    if ts.accept("!"):
        return Not(_parse_negation(ts))
    if ts.peek().text == "(" and _parens_hold_formula(ts):
        ts.expect("(")
        node = _parse_formula(ts)
        ts.expect(")")
        return node
    return _parse_atom_formula(ts)


def _parens_hold_formula(ts: _Stream) -> bool:
    # Lookahead: does this parenthesized group contain a relation or
    # connective at depth >= 1 before closing?  If not, it is a polynomial
    # factor and must be parsed as part of an atom.
    depth = 0
    for ahead in range(len(ts.tokens) - ts.i):
        tok = ts.peek(ahead)
        if tok.kind == "end":
            return False
        if tok.text == "(":
            depth += 1
        elif tok.text == ")":
            depth -= 1
            if depth == 0:
                return False
        elif depth >= 1 and tok.text in ("<", ">", "=", "<=", ">=", "!=", "&&", "||", "!"):
            return True
    return False


def _parse_atom_formula(ts: _Stream) -> Formula:
    start = ts.peek().pos
    poly = _parse_expression(ts)
    tok = ts.peek()
    if tok.text not in _REL:
        raise ParseError("expected a relation (< = > <= >= !=)", tok.pos)
    ts.next()
    zero = ts.peek()
    if zero.kind != "num" or zero.text != "0":
        raise ParseError("atoms compare against literal 0", zero.pos)
    ts.next()
    poly = clear_denominators(poly)
    if poly.is_zero:
        raise ParseError("atom polynomial is identically zero", start)
    rels = _REL[tok.text]
    atoms = tuple(Atom(poly, r) for r in rels)
    return atoms[0] if len(atoms) == 1 else Or(atoms)


# ---------------------------------------------------------------------------
# requests


Endpoint = tuple  # ("num", Fraction) | ("inf", +-1) | ("root", UniPoly, int)


@dataclass(frozen=True)
class Options:
    format: str = "structured"
    verbose: bool = False
    max_precision_bits: int = 4096


@dataclass(frozen=True)
class Request:
    command: str
    h: UniPoly | None = None
    interval: tuple[Endpoint, Endpoint] | None = None
    f: BiPoly | None = None
    g: BiPoly | None = None
    gs: tuple[BiPoly, ...] | None = None
    formula: Formula | None = None
    zero_pair: tuple[int, int] | None = None
    options: Options = field(default=Options(), compare=False)


COMMANDS = ("taq", "signconds", "decide", "thom", "compare", "roots")


def parse_input(text: str, options: Options | None = None) -> Request:
    """Parse and validate a request; raises ParseError / InputError."""
    ts = _Stream(text)
    head = ts.peek()
    if head.kind != "name" or head.text not in COMMANDS:
        ts.fail("expected a command: " + " | ".join(COMMANDS))
    command = ts.next().text

    h: UniPoly | None = None
    interval: tuple[Endpoint, Endpoint] | None = None
    f = g = None
    gs = None
    formula = None
    zero_pair = None
    payload_seen = False

    def parse_segment():
        nonlocal h, interval, f, g, gs, formula, zero_pair, payload_seen
        tok = ts.peek()
        if tok.text == "h" and ts.peek(1).text == "=":
            if h is not None:
                ts.fail("h given twice")
            ts.next()
            ts.next()
            pos = ts.peek().pos
            h_local = _require_pure(_parse_expression(ts), "h", pos)
            h = h_local
            return
        if tok.text == "on":
            if interval is not None:
                ts.fail("interval given twice")
            ts.next()
            interval = _parse_interval(ts)
            return
        if tok.text in ("F", "G") and ts.peek(1).text == "=":
            if command != "taq":
                ts.fail("F = / G = segments belong to the taq command")
            which = ts.next().text
            ts.next()
            poly = clear_denominators(_parse_expression(ts))
            nonlocal_set = {"F": "f", "G": "g"}[which]
            if nonlocal_set == "f":
                f = poly
            else:
                g = poly
            return
        if tok.text == "zeros" and ts.peek(1).text == "=":
            if command != "compare":
                ts.fail("zeros = belongs to the compare command")
            ts.next()
            ts.next()
            first = _parse_index(ts)
            ts.expect(",")
            zero_pair = (first, _parse_index(ts))
            return
        # otherwise: the command-specific main payload
        if payload_seen:
            ts.fail("unexpected extra segment")
        payload_seen = True
        if command == "decide":
            ts.expect("exists")
            ts.expect("x")
            ts.expect(".")
            formula = _parse_formula(ts)
        elif command in ("thom", "compare"):
            f_local = clear_denominators(_parse_expression(ts))
            f = f_local
        elif command == "signconds":
            items = [clear_denominators(_parse_expression(ts))]
            while ts.accept(","):
                items.append(clear_denominators(_parse_expression(ts)))
            gs = tuple(items)
        elif command == "roots":
            pos = tok.pos
            f = BiPoly.from_x(_require_pure(_parse_expression(ts), "the roots payload", pos))
        else:
            ts.fail("taq takes F = ... ; G = ... segments")

    while ts.peek().kind != "end":
        parse_segment()
        if ts.peek().kind == "end":
            break
        ts.expect(";")

    request = Request(
        command=command,
        h=h,
        interval=interval,
        f=f,
        g=g,
        gs=gs,
        formula=formula,
        zero_pair=zero_pair,
        options=options or Options(),
    )
    _validate(request)
    return request


def _parse_index(ts: _Stream) -> int:
    tok = ts.peek()
    if tok.kind != "num":
        raise ParseError("expected a 1-based zero index", tok.pos)
    ts.next()
    value = int(tok.text)
    if value < 1:
        raise ParseError("zero indices are 1-based", tok.pos)
    return value


def _parse_interval(ts: _Stream) -> tuple[Endpoint, Endpoint]:
    ts.expect("[")
    lo = _parse_endpoint(ts)
    ts.expect(",")
    hi = _parse_endpoint(ts)
    ts.expect("]")
    return (lo, hi)


def _parse_endpoint(ts: _Stream) -> Endpoint:
    tok = ts.peek()
    negate = False
    if tok.text in ("-", "+"):
        negate = tok.text == "-"
        ts.next()
        tok = ts.peek()
    if tok.kind == "name" and tok.text == "inf":
        ts.next()
        return ("inf", -1 if negate else 1)
    if tok.kind == "name" and tok.text == "root":
        if negate:
            raise ParseError("write root(-p, k) or adjust the index instead of -root(...)", tok.pos)
        ts.next()
        ts.expect("(")
        pos = ts.peek().pos
        poly = _require_pure(_parse_expression(ts), "a root() polynomial", pos)
        ts.expect(",")
        index = _parse_index(ts)
        ts.expect(")")
        if poly.is_zero:
            raise ParseError("root() of the zero polynomial", pos)
        return ("root", poly, index)
    if tok.kind == "num":
        ts.next()
        value = Fraction(int(tok.text))
        if ts.accept("/"):
            den = ts.peek()
            if den.kind != "num" or int(den.text) == 0:
                raise ParseError("endpoint denominator must be a nonzero integer", den.pos)
            ts.next()
            value /= int(den.text)
        return ("num", -value if negate else value)
    raise ParseError("expected an interval endpoint", tok.pos)


def _validate(req: Request) -> None:
    needs_h = req.command in ("taq", "signconds", "decide", "thom", "compare")
    if needs_h:
        if req.h is None:
            raise InputError(f"{req.command} requires an 'h = ...' segment")
        if req.h.degree < 1:
            raise InputError("h must be nonconstant (constant h leaves no exact exponential)")
        if any(c.denominator != 1 for c in req.h.coeffs):
            raise InputError("h must have integer coefficients")
    elif req.h is not None:
        raise InputError("roots takes no h segment (pure polynomial command)")
    needs_interval = req.command in ("taq", "signconds", "decide")
    if needs_interval and req.interval is None:
        raise InputError(f"{req.command} requires an 'on [a, b]' segment")
    if req.command in ("thom", "compare") and req.interval is not None:
        raise InputError(f"{req.command} always works over the whole line; drop 'on [...]'")
    if req.command == "taq":
        if req.f is None or req.g is None:
            raise InputError("taq requires both 'F = ...' and 'G = ...' segments")
        if req.f.is_zero or req.g.is_zero:
            raise InputError("taq functions must be nonzero")
    if req.command in ("thom", "compare"):
        if req.f is None or req.f.is_zero:
            raise InputError(f"{req.command} requires a nonzero function payload")
        if req.f.deg_y < 1:
            raise InputError(f"{req.command} requires a function that involves E")
    if req.command == "compare" and req.zero_pair is None:
        raise InputError("compare requires a 'zeros = i, j' segment")
    if req.command == "signconds":
        if not req.gs:
            raise InputError("signconds requires at least one function")
        if any(g.is_zero for g in req.gs):
            raise InputError("signconds functions must be nonzero")
    if req.command == "roots" and (req.f is None or req.f.is_zero):
        raise InputError("roots requires a nonzero polynomial")


# ---------------------------------------------------------------------------
# canonical pretty-printing (inverse of parse_input on valid requests)


def format_endpoint(ep: Endpoint) -> str:
    kind = ep[0]
    if kind == "num":
        v: Fraction = ep[1]
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if kind == "inf":
        return "inf" if ep[1] > 0 else "-inf"
    return f"root({format_poly(ep[1].coeffs, 'x')}, {ep[2]})"


def _format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        rel = {-1: "<", 0: "=", 1: ">"}[f.rel]
        return f"{format_bipoly(f.poly)} {rel} 0"
    if isinstance(f, And):
        return " && ".join(_wrap(p, f) for p in f.parts)
    if isinstance(f, Or):
        return " || ".join(_wrap(p, f) for p in f.parts)
    if isinstance(f, Not):
        return "!" + _wrap(f.part, f)
    raise InputError(f"not a formula node: {f!r}")


def _wrap(part: Formula, parent: Formula) -> str:
    text = _format_formula(part)
    needs = (
        isinstance(parent, Not)
        and not isinstance(part, Atom)
        or isinstance(parent, And)
        and isinstance(part, Or)
    )
    return f"({text})" if needs else text


def to_text(req: Request) -> str:
    """Canonical request text; parse_input(to_text(r)) == r."""
    parts: list[str] = []
    if req.command == "taq":
        parts.append(f"taq F = {format_bipoly(req.f)}")
        parts.append(f"G = {format_bipoly(req.g)}")
    elif req.command == "decide":
        parts.append(f"decide exists x . {_format_formula(req.formula)}")
    elif req.command == "signconds":
        parts.append("signconds " + ", ".join(format_bipoly(g) for g in req.gs))
    elif req.command in ("thom", "compare"):
        parts.append(f"{req.command} {format_bipoly(req.f)}")
    elif req.command == "roots":
        parts.append(f"roots {format_poly(req.f.row(0).coeffs, 'x')}")
    else:
        raise InputError(f"unknown command {req.command!r}")
    if req.h is not None:
        parts.append(f"h = {format_poly(req.h.coeffs, 'x')}")
    if req.zero_pair is not None:
        parts.append(f"zeros = {req.zero_pair[0]}, {req.zero_pair[1]}")
    if req.interval is not None:
        lo, hi = req.interval
        parts.append(f"on [{format_endpoint(lo)}, {format_endpoint(hi)}]")
    return " ; ".join(parts)
