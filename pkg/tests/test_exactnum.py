from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2quant.exactnum import GaussRational, I, NonlinearError, ParamPoly, format_poly, solve_linear

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**4)
gauss = st.builds(GaussRational, rationals, rationals)

VARS = ("alpha", "gamma", "C", "c", "s")


@st.composite
def params(draw, max_terms=4):
    p = ParamPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        term = ParamPoly.const(draw(gauss))
        for v in draw(st.lists(st.sampled_from(VARS), max_size=3)):
            term = term * ParamPoly.var(v)
        p = p + term
    return p


@given(gauss, gauss, gauss)
def test_gauss_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * a.inverse() == GaussRational(1)


def test_i_squared():
    assert I * I == GaussRational(-1)
    assert I ** 4 == GaussRational(1)
    assert GaussRational(3, 4).norm() == 25


@given(params(), params(), params())
@settings(max_examples=60)
def test_paramploy_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == ParamPoly()


@given(params(), params())
@settings(max_examples=60)
def test_paramploy_matches_sympy(p, q):
    syms = {v: sympy.Symbol(v) for v in VARS}

    def to_sympy(x):
        out = 0
        for mono, k in x.terms.items():
            term = sympy.Rational(k.re.numerator, k.re.denominator) + sympy.I * sympy.Rational(k.im.numerator, k.im.denominator)
            for n, e in mono:
                term *= syms[n] ** e
            out += term
        return sympy.expand(out)

    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


def test_canonical_text():
    a, C, c = ParamPoly.var("alpha"), ParamPoly.var("C"), ParamPoly.var("c")
    assert format_poly(3 * a * a * C - c + 2 * I) == "3*alpha^2*C - c + 2*i"
    assert str(ParamPoly()) == "0"


def test_substitute_and_evaluate():
    a, C = ParamPoly.var("alpha"), ParamPoly.var("C")
    p = a * a * (C + 3)
    assert p.substitute({"C": -3}) == ParamPoly()
    assert p.evaluate({"alpha": 2, "C": Fraction(1, 2)}) == GaussRational(14)


def test_solve_linear_gamma():
    a, C, c, g = (ParamPoly.var(v) for v in ("alpha", "C", "c", "gamma"))
    sol = solve_linear([3 * g + a * C - c], ["gamma"])
    assert sol.consistent
    assert sol.value("gamma") == (c - a * C) * Fraction(1, 3)


def test_solve_linear_inconsistent_and_nonlinear():
    x = ParamPoly.var("x")
    assert not solve_linear([x - 1, x - 2], ["x"]).consistent
    with pytest.raises(NonlinearError):
        solve_linear([x * x - 1], ["x"])


def test_solve_linear_against_sympy():
    x, y, z = (ParamPoly.var(v) for v in "xyz")
    C = ParamPoly.var("C")
    eqs = [x + 2 * y - C, 3 * y - z + 1, x - z]
    sol = solve_linear(eqs, ["x", "y", "z"])
    X, Y, Z, Cs = sympy.symbols("x y z C")
    ref = sympy.solve([X + 2 * Y - Cs, 3 * Y - Z + 1, X - Z], [X, Y, Z])
    for name, sym in zip("xyz", (X, Y, Z)):
        got = sol.value(name).evaluate({"C": 7})
        assert got == GaussRational(Fraction(str(ref[sym].subs(Cs, 7))))
