from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from desing.charts import OLD, Chart, DivisorLabel
from desing.idealistic import IdealisticSpace, MarkedIdeal
from desing.parsing import parse_poly
from desing.poly import Poly

FIXTURES = Path(__file__).parent / "fixtures"


def space(variables, ideals, divisor=(), subspace=()):
    """space("x y", [("y^2 - x^3", 2)], divisor={"E1": "x"}, subspace="y")"""
    if isinstance(variables, str):
        variables = variables.split()
    if isinstance(subspace, str):
        subspace = subspace.split()
    div = []
    for lab, v in dict(divisor).items():
        div.append((DivisorLabel(lab, OLD), variables.index(v)))
    chart = Chart(tuple(variables), tuple(div), frozenset(variables.index(v) for v in subspace) or None)
    return IdealisticSpace(chart, tuple(MarkedIdeal(parse_poly(f, variables), d) for f, d in ideals))


def P(text, variables):
    if isinstance(variables, str):
        variables = variables.split()
    return parse_poly(text, variables)


# sympy is used only as an independent oracle.

def to_sympy(f: Poly, names):
    syms = sympy.symbols(list(names))
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s**e
        expr += term
    return expr, syms


def from_sympy(expr, syms) -> Poly:
    p = sympy.Poly(sympy.expand(expr), *syms)
    return Poly({m: Fraction(int(c.p), int(c.q)) for m, c in p.terms()}, len(syms))


def sympy_order(f: Poly, names, point):
    """Lowest total degree after translating ``point`` to the origin."""
    expr, syms = to_sympy(f, names)
    expr = sympy.expand(expr.subs({s: s + sympy.Rational(str(p)) for s, p in zip(syms, point)}, simultaneous=True))
    if expr == 0:
        return None
    return min(sum(m) for m in sympy.Poly(expr, *syms).monoms())


@pytest.fixture
def fixtures():
    return FIXTURES
