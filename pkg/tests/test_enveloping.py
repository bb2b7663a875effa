import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2quant import enveloping
from sl2quant.enveloping import (
    Em,
    Ep,
    H,
    ONE,
    NcPoly,
    basis_enumerate,
    eval_in_module,
    evaluate,
    nc_commutator,
    nc_mul,
    nc_reduce,
    nc_sym,
)
from sl2quant.exactnum import GaussRational, ParamPoly
from sl2quant.repmod import build_module

i = GaussRational(0, 1)
C = ParamPoly.var("C")


def test_defining_relations():
    assert nc_commutator(H, Ep) == Ep * (-2 * i)
    assert nc_commutator(H, Em) == Em * (2 * i)
    assert nc_commutator(Ep, Em) == H * (-i)


def test_ladder_products():
    quarter = Fraction(1, 4)
    assert Ep * Em == (ONE * C - H * H - H * (2 * i)) * quarter
    assert Em * Ep == (ONE * C - H * H + H * (2 * i)) * quarter
    assert nc_sym(Ep, Em) == (ONE * C - H * H) * quarter


def test_quantum_parser_evaluation():
    assert evaluate("[H, Ep]") == Ep * (-2 * i)
    assert evaluate("H^2 + 4*(Ep, Em)") == ONE * C
    assert evaluate("Ep*Em - (Ep, Em)") == H * (-i / 2)


def test_casimir_is_central():
    cas = H * H + nc_sym(Ep, Em) * 4
    for g in (H, Ep, Em):
        assert nc_commutator(cas, g).is_zero()
    assert enveloping.casimir_centrality_by_reduction()["passed"]


words = st.lists(st.sampled_from(enveloping.LETTERS), max_size=6).map(tuple)


@given(words, words, words)
@settings(max_examples=80)
def test_nc_mul_associative(a, b, c):
    x, y, z = (nc_reduce(w) for w in (a, b, c))
    assert nc_mul(nc_mul(x, y), z) == nc_mul(x, nc_mul(y, z))


@given(words, words)
@settings(max_examples=80)
def test_reduce_is_multiplicative(a, b):
    assert nc_reduce(a + b) == nc_mul(nc_reduce(a), nc_reduce(b))


@given(words)
@settings(max_examples=80)
def test_rewriting_terminates_with_decreasing_measure(w):
    out = nc_reduce(w, "random", rng=random.Random(1), check_termination=True)
    assert out == nc_reduce(w, "leftmost")


def test_normal_words_are_fixed():
    for j, t in basis_enumerate(3):
        word = ("H",) * j + (("Ep",) * t if t > 0 else ("Em",) * -t)
        assert enveloping.is_normal_word(word)
        assert nc_reduce(word) == NcPoly.monomial(j, t)


def test_confluence_thousand_words():
    res = enveloping.confluence_check(1000, seed=4)
    assert res["passed"], res["failures"][:3]


def test_evaluation_homomorphism():
    m = build_module(Fraction(7, 3), 24)
    assert enveloping.homomorphism_check(m, 150, seed=2)["passed"]


def test_basis_size():
    for r in range(6):
        assert len(basis_enumerate(r)) == (r + 1) ** 2


@pytest.mark.parametrize("r", [1, 2, 3])
def test_basis_independence(r):
    m = build_module(Fraction(7, 3), 4 * r + 4)
    res = enveloping.basis_independence_check(r, m)
    assert res["rank"] == (r + 1) ** 2


def test_basis_check_needs_levels():
    with pytest.raises(enveloping.TruncationError):
        enveloping.basis_independence_check(3, build_module(Fraction(7, 3), 9))


def test_eval_in_module_binds_casimir():
    m = build_module(Fraction(1, 2), 10)
    cas = eval_in_module(H * H + nc_sym(Ep, Em) * 4, m)
    want = eval_in_module(ONE * C, m)
    cols = m.interior(1)
    assert (cas - want).restrict_columns(cols).is_zero()
    assert want == m.identity().scale(GaussRational(Fraction(3, 4)))
