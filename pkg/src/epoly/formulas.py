"""Quantifier-free formulas over sign conditions of a function family.

Atoms compare a function against zero with one of the three primitive
relations; the surface relations <=, >= and != are desugared by the parser
into disjunctions of these.  A formula is evaluated against an assignment of
signs to its distinct polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InputError
from .polys import BiPoly


@dataclass(frozen=True)
class Atom:
    """poly rel 0 with rel encoded as -1 (<), 0 (=), +1 (>)."""

    poly: BiPoly
    rel: int

    def __post_init__(self):
        if self.poly.is_zero:
            raise InputError("formula atom with the zero polynomial")
        if self.rel not in (-1, 0, 1):
            raise InputError("atom relation must be -1, 0 or 1")


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Not:
    part: "Formula"


Formula = Union[Atom, And, Or, Not]


def formula_polynomials(formula: Formula) -> list[BiPoly]:
    """Distinct atom polynomials in order of first appearance."""
    seen: dict[tuple, BiPoly] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, Atom):
            seen.setdefault(f.poly.key(), f.poly)
        elif isinstance(f, (And, Or)):
            for part in f.parts:
                walk(part)
        elif isinstance(f, Not):
            walk(f.part)
        else:
            raise InputError(f"not a formula node: {f!r}")

    walk(formula)
    return list(seen.values())


def evaluate_formula(formula: Formula, signs: dict[tuple, int]) -> bool:
    """Truth value under an exact sign assignment for every atom polynomial."""
    if isinstance(formula, Atom):
        return signs[formula.poly.key()] == formula.rel
    if isinstance(formula, And):
        return all(evaluate_formula(p, signs) for p in formula.parts)
    if isinstance(formula, Or):
        return any(evaluate_formula(p, signs) for p in formula.parts)
    if isinstance(formula, Not):
        return not evaluate_formula(formula.part, signs)
    raise InputError(f"not a formula node: {formula!r}")


def formula_length(formula: Formula) -> int:
    if isinstance(formula, Atom):
        return 1
    if isinstance(formula, (And, Or)):
        return 1 + sum(formula_length(p) for p in formula.parts)
    if isinstance(formula, Not):
        return 1 + formula_length(formula.part)
    raise InputError(f"not a formula node: {formula!r}")
