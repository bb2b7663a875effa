from fractions import Fraction

import pytest
import sympy

from sl2quant import poisson, quantize
from sl2quant.enveloping import Em, Ep, H, ONE, eval_in_module, nc_commutator, nc_sym
from sl2quant.exactnum import GaussRational, ParamPoly
from sl2quant.repmod import build_module

i = GaussRational(0, 1)
alpha, gamma, C, c = (ParamPoly.var(v) for v in ("alpha", "gamma", "C", "c"))


@pytest.fixture(scope="module")
def qmap():
    return quantize.extend_to_degree2()


@pytest.fixture(scope="module")
def constraints(qmap):
    return quantize.derive_constraints(qmap)


def test_bracket_rule_degree_one():
    q = quantize.QuantMap()
    assert quantize.quantize_expression("{h, ep}", q) == Ep * 2
    assert quantize.quantize_expression("2*ep", q) == Ep * 2
    assert quantize.quantize_expression("1", q) == ONE


def test_h2_level_expression():
    q = quantize.QuantMap()
    q.assign((2, 0, 0), H * H * alpha + ONE * gamma)
    got = quantize.quantize_expression("3*h^2 - 1/2*{{h^2, em}, ep}", q)
    qh2 = H * H * alpha + ONE * gamma
    want = qh2 * 3 + nc_commutator(nc_commutator(qh2, Em), Ep) * Fraction(1, 2)
    assert got == want
    assert got - ONE * c == ONE * (alpha * C + 3 * gamma - c)


def test_domain_error():
    with pytest.raises(quantize.QuantizationDomainError):
        quantize.quantize_expression("{h^2, ep}", quantize.QuantMap())


def test_nonlinear_product_rejected():
    with pytest.raises(ValueError):
        quantize.quantize_expression("h*{h, ep}", quantize.QuantMap())


def test_commutant_of_H():
    free, _ = quantize.commutant_of_H(3)
    assert free == [(0, 0), (1, 0), (2, 0), (3, 0)]


@pytest.mark.parametrize("r", range(2, 7))
def test_qh2_stable_in_degree(r):
    res = quantize.derive_qh2(r)
    assert res.forced == H * H * alpha + ONE * gamma
    assert res.gamma_relation == 3 * gamma + alpha * C - c
    for k, v in res.coefficients.items():
        if k not in ("a0", "a2"):
            assert v == ParamPoly()
        assert res.leading_factors[int(k[1:])] == ParamPoly.const(3 - Fraction(int(k[1:]) * (int(k[1:]) + 1), 2))


def test_gamma_relation_in_s():
    s = ParamPoly.var("s")
    assert quantize.derive_qh2(2).eq_gamma_in_s() == 3 * gamma - alpha * (s * s - 1) - c


def test_degree2_formulas(qmap):
    for key, want in quantize.expected_degree2().items():
        assert qmap.assignments[key] == want
    assert qmap.assignments[(0, 1, 1)] == nc_sym(Ep, Em) * alpha + ONE * gamma * Fraction(1, 2)


def test_degree2_bracket_rule_exhaustive(qmap):
    results = quantize.degree2_bracket_rule_check(qmap)
    assert len(results) > 30
    assert all(ok for _, _, ok in results)


def test_constraints(constraints):
    eq1, eq2 = constraints.equations
    assert eq1 == alpha * alpha * (C + 3) - c
    assert eq2 == alpha * (alpha * alpha * (C + 9) - c)
    assert constraints.details["cubic_h"]["other_coefficients_zero"]
    assert constraints.details["cubic_ladder"]["other_coefficients_zero"]
    assert any("faithful" in s for s in constraints.side_conditions)


def test_constraint_spot_check_by_hand(qmap):
    # coefficient of H in Q(lhs of cubic_h): 2*i[aEp^2, aEm^2] + i[a(H,Ep), a(H,Em)] - c H
    lhs = quantize.quantize_expression("2*{ep^2, em^2} + {h*ep, h*em}", qmap)
    manual = nc_commutator(Ep * Ep, Em * Em) * (2 * i) + nc_commutator(nc_sym(H, Ep), nc_sym(H, Em)) * i
    assert lhs == manual * (alpha * alpha)
    assert (lhs - H * c).coefficient(1, 0) == alpha * alpha * (C + 3) - c


def test_reassociated_identity_gives_same_constraint(qmap):
    ids = quantize.load_identities()
    # the two summands of cubic_ladder in the other order
    lhs = ids["cubic_ladder"]["lhs"]
    first, second = lhs.split(" + 3/4*")
    swapped = f"3/4*{second} + {first}"
    assert poisson.verify_identity(swapped, ids["cubic_ladder"]["rhs"]).holds
    a = quantize.quantize_expression(lhs, qmap)
    b = quantize.quantize_expression(swapped, qmap)
    assert a == b


def _sympy_ideal_is_trivial(extra):
    a, Cs, cs, u = sympy.symbols("alpha C c u")
    eqs = [a**2 * (Cs + 3) - cs, a * (a**2 * (Cs + 9) - cs)] + extra(a, Cs, cs, u)
    gb = sympy.groebner(eqs, a, Cs, cs, u, order="lex")
    return list(gb.exprs) == [1]


def test_case_analysis_oracle():
    # c != 0 (u*c = 1): no solutions at all
    assert _sympy_ideal_is_trivial(lambda a, Cs, cs, u: [u * cs - 1])
    # c = 0 and alpha != 0 (u*alpha = 1): no solutions
    assert _sympy_ideal_is_trivial(lambda a, Cs, cs, u: [cs, u * a - 1])
    # c = 0 and alpha = 0 is a genuine solution
    assert not _sympy_ideal_is_trivial(lambda a, Cs, cs, u: [cs, a])


def test_case_analysis_verdicts(constraints):
    v0 = quantize.case_analysis(constraints, True)
    assert v0.verdict == "consistent_trivial"
    assert v0.alpha == ParamPoly() and v0.gamma == ParamPoly()
    # the C = -3 branch is closed by the second constraint
    killed = [b for b in v0.branches if b.status == "inconsistent"]
    assert any(b.substitutions.get("C") == ParamPoly.const(-3) for b in killed)
    vc = quantize.case_analysis(constraints, False)
    assert vc.verdict == "inconsistent"
    assert all(b.status == "inconsistent" for b in vc.branches)


def test_case_analysis_undetermined():
    cs = quantize.ConstraintSet([alpha * C - c], ["toy"], [])
    assert quantize.case_analysis(cs, False).verdict == "undetermined"


def test_case_analysis_numeric_casimir(constraints):
    cs = quantize.ConstraintSet([e.substitute({"c": Fraction(7, 2)}) for e in constraints.equations], constraints.labels, [])
    assert quantize.case_analysis(cs, False).verdict == "inconsistent"


def test_triviality_propagation():
    rep = quantize.triviality_propagation(6)
    assert rep["passed"]
    names = [x["link"] for x in rep["links"]]
    assert len(names) == len(set(names))


def test_trivial_quantization_examples():
    m = build_module(Fraction(7, 3), 12)
    assert quantize.trivial_quantization(poisson.ClassicalPoly.const(1), m) == m.identity()
    assert quantize.trivial_quantization(poisson.h + poisson.h**3, m) == m.H
    assert quantize.trivial_quantization(poisson.ep * poisson.em, m) == quantize.trivial_quantization(poisson.ClassicalPoly(), m)
    lin = poisson.h * 2 - poisson.em
    assert quantize.trivial_quantization(lin, m) == eval_in_module(H * 2 - Em, m)
    with pytest.raises(poisson.GradingError):
        quantize.trivial_quantization(poisson.h, m, casimir="c")


def test_trivial_quantization_bracket_rule():
    m = build_module(Fraction(7, 3), 24)
    res = quantize.trivial_quantization_checks(m, pairs=60, seed=9)
    assert res["passed"]


def test_bracket_rule_check_detects_a_wrong_assignment():
    q = quantize.extend_to_degree2()
    q.assign((0, 2, 0), Ep * Ep * (2 * alpha))
    assert not all(ok for _, _, ok in quantize.degree2_bracket_rule_check(q))
