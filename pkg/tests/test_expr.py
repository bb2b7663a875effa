import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2quant.expr import BinOp, Bracket, Neg, Num, ParseError, Pow, Sym, parse, unparse


def test_bracket_example():
    assert parse("{h, ep}") == Bracket("poisson", Sym("h"), Sym("ep"))


def test_id1_tree():
    tree = parse("2*{ep^2, em^2} + {h*ep, h*em}")
    assert tree == BinOp(
        "+",
        BinOp("*", Num(2), Bracket("poisson", Pow(Sym("ep"), 2), Pow(Sym("em"), 2))),
        Bracket("poisson", BinOp("*", Sym("h"), Sym("ep")), BinOp("*", Sym("h"), Sym("em"))),
    )


def test_error_position():
    with pytest.raises(ParseError) as err:
        parse("{h,")
    assert err.value.line == 1
    assert err.value.column == 4
    assert err.value.expected


def test_precedence():
    assert parse("1 + 2*h^2") == BinOp("+", Num(1), BinOp("*", Num(2), Pow(Sym("h"), 2)))
    assert parse("a - b - c".replace("a", "h").replace("b", "ep").replace("c", "em")) == BinOp(
        "-", BinOp("-", Sym("h"), Sym("ep")), Sym("em")
    )


def test_quantum_grammar():
    assert parse("(H, Ep)", "quantum") == Bracket("sym", Sym("H"), Sym("Ep"))
    assert parse("[H, Em]", "quantum") == Bracket("commutator", Sym("H"), Sym("Em"))
    assert parse("(H)", "quantum") == Sym("H")
    with pytest.raises(ParseError):
        parse("{h, ep}", "quantum")
    with pytest.raises(ParseError):
        parse("[h, ep]", "classical")


def test_bad_exponent():
    with pytest.raises(ParseError):
        parse("h^ep")
    assert parse("h^(3)") == Pow(Sym("h"), 3)


def _classical_tree(depth):
    leaves = st.one_of(st.integers(0, 20).map(Num), st.sampled_from(["h", "ep", "em", "c", "alpha", "i"]).map(Sym))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(Neg),
            st.tuples(st.sampled_from("+-*/"), kids, kids).map(lambda t: BinOp(*t)),
            st.tuples(kids, st.integers(0, 5)).map(lambda t: Pow(*t)),
            st.tuples(kids, kids).map(lambda t: Bracket("poisson", *t)),
        ),
        max_leaves=depth,
    )


@given(_classical_tree(12))
@settings(max_examples=300)
def test_round_trip_hypothesis(tree):
    assert parse(unparse(tree)) == tree


def _random_tree(rng, depth, grammar):
    gens = ["h", "ep", "em"] if grammar == "classical" else ["H", "Ep", "Em", "I"]
    if depth == 0 or rng.random() < 0.25:
        return Num(rng.randint(0, 9)) if rng.random() < 0.3 else Sym(rng.choice(gens + ["c", "s", "i"]))
    kind = rng.randrange(4)
    if kind == 0:
        return Neg(_random_tree(rng, depth - 1, grammar))
    if kind == 1:
        return BinOp(rng.choice("+-*/"), _random_tree(rng, depth - 1, grammar), _random_tree(rng, depth - 1, grammar))
    if kind == 2:
        return Pow(_random_tree(rng, depth - 1, grammar), rng.randint(0, 4))
    brackets = ["poisson"] if grammar == "classical" else ["commutator", "sym"]
    return Bracket(rng.choice(brackets), _random_tree(rng, depth - 1, grammar), _random_tree(rng, depth - 1, grammar))


@pytest.mark.parametrize("grammar", ["classical", "quantum"])
def test_round_trip_thousand(grammar):
    rng = random.Random(11)
    for _ in range(1000):
        tree = _random_tree(rng, 5, grammar)
        assert parse(unparse(tree), grammar) == tree
