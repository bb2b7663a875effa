"""The nine acceptance criteria, each exact, each with its runtime budget.

Every test prints one ``ACCEPTANCE <n> PASS|FAIL`` line to the terminal,
whether or not pytest is capturing output.
"""

import random
import time
from fractions import Fraction

import pytest

from sl2quant import enveloping, poisson, quantize, repmod
from sl2quant.cli import run_command
from sl2quant.exactnum import GaussRational, ParamPoly

alpha, gamma, C, c, s = (ParamPoly.var(v) for v in ("alpha", "gamma", "C", "c", "s"))


class Criterion:
    def __init__(self):
        self.number = None
        self.ok = False

    def __call__(self, number, title, budget_s):
        self.number, self.title, self.budget = number, title, budget_s
        self.t0 = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.t0

    def done(self):
        assert self.elapsed() < self.budget, f"over the {self.budget}s budget"
        self.ok = True


@pytest.fixture
def criterion(capsys):
    crit = Criterion()
    yield crit
    with capsys.disabled():
        verdict = "PASS" if crit.ok else "FAIL"
        print(f"\nACCEPTANCE {crit.number} {verdict}  {crit.title}  ({crit.elapsed():.2f}s, budget {crit.budget}s)")


def _run(argv, capsys):
    code, report = run_command(argv + ["--format", "json"])
    capsys.readouterr()
    return code, report


def test_1_classical_identities(criterion, capsys):
    criterion(1, "classical identity suite", 5)
    ids = quantize.load_identities()
    for name in ("h2_level", "cubic_h", "cubic_ladder"):
        entry = ids[name]
        rep = poisson.verify_identity(entry["lhs"], entry["rhs"], "c", name)
        assert rep.residual.is_zero(), (name, str(rep.residual))
    for l in range(2, 7):
        rep = poisson.verify_identity(f"h^{l}", f"1/{2 * l + 2}*{{{{h^2, h^{l - 2}*ep}}, em}}", 0)
        assert rep.residual.is_zero(), (l, str(rep.residual))
    code, report = _run(["verify", "classical-identities"], capsys)
    assert code == 0 and all(ch.residual == "0" for ch in report.checks)
    criterion.done()


def test_2_form_of_qh2(criterion, capsys):
    criterion(2, "Q(h^2) = alpha H^2 + gamma I with 3 gamma = c - alpha C", 5)
    code, report = _run(["derive", "qh2", "--max-degree", "6"], capsys)
    assert code == 0
    res = quantize.derive_qh2(6)
    assert str(res.forced) == "alpha*H^2 + gamma"
    assert res.gamma_relation == 3 * gamma - (c - alpha * C)
    assert all(v == ParamPoly() for k, v in res.coefficients.items() if k not in ("a0", "a2"))
    assert sorted(res.coefficients) == [f"a{k}" for k in range(7)]
    # binding C = 1 - s^2 gives 3 gamma = alpha (s^2 - 1) + c
    assert res.eq_gamma_in_s() == 3 * gamma - (alpha * (s * s - 1) + c)
    assert report.data["gamma_relation_in_s"] == "3*gamma = alpha*(s^2 - 1) + c"
    criterion.done()


def test_3_constraints(criterion, capsys):
    criterion(3, "constraint pair from the quantized cubic identities", 30)
    code, report = _run(["derive", "constraints"], capsys)
    assert code == 0
    cs = quantize.derive_constraints()
    assert cs.equations[0] == alpha**2 * (C + 3) - c
    assert cs.equations[1] == alpha * (alpha**2 * (C + 9) - c)
    assert cs.details["cubic_h"]["other_coefficients_zero"]
    assert cs.details["cubic_ladder"]["other_coefficients_zero"]
    assert list(report.data["constraints"].values()) == ["alpha^2*(C + 3) - c = 0", "alpha*(alpha^2*(C + 9) - c) = 0"]
    criterion.done()


def test_4_verdicts(criterion, capsys):
    criterion(4, "c = 0 consistent_trivial, c != 0 inconsistent", 5)
    code, rep0 = _run(["verdict", "--casimir", "0"], capsys)
    assert code == 0
    assert rep0.data["outcome"] == "consistent_trivial"
    assert rep0.data["alpha"] == "0" and rep0.data["gamma"] == "0"
    assert rep0.data["conclusion"] == "Q(P_(2)(M)) = {0}"
    assert len(rep0.checks) > 5
    code, repc = _run(["verdict", "--casimir", "c"], capsys)
    assert code == 0
    assert repc.data["outcome"] == "inconsistent"
    criterion.done()


def test_5_basis_rank(criterion):
    criterion(5, "normal-form basis rank (r+1)^2 for r = 1..5", 30)
    for r in range(1, 6):
        m = repmod.build_module(Fraction(7, 3), 4 * r + 4)
        res = enveloping.basis_independence_check(r, m)
        assert res["rank"] == (r + 1) ** 2, res
    criterion.done()


def test_6_rewrite_system(criterion):
    criterion(6, "confluence, evaluation homomorphism, central Casimir", 30)
    conf = enveloping.confluence_check(1000, seed=2024, max_length=8)
    assert conf["passed"], conf["failures"][:3]
    m = repmod.build_module(Fraction(7, 3), 24)
    hom = enveloping.homomorphism_check(m, 300, seed=2024, max_length=8)
    assert hom["passed"], hom["failures"][:3]
    assert enveloping.casimir_centrality_by_reduction()["passed"]
    criterion.done()


def test_7_module_casimir(criterion):
    criterion(7, "Casimir = 1 - s^2 on weight modules, s = 2 gives -3", 5)
    rng = random.Random(7)
    values = set()
    while len(values) < 25:
        values.add(repmod.random_rational(rng))
    for sv in values:
        m = repmod.build_module(sv, 9)
        assert repmod.check_relations(m).passed
        assert repmod.casimir_value(m) == GaussRational(1 - sv * sv)
    assert repmod.casimir_value(repmod.build_module(2, 9)) == GaussRational(-3)
    criterion.done()


def test_8_recursion(criterion):
    criterion(8, "polynomial and digamma solutions of the eigenvalue recursion", 10)
    assert repmod.formal_polynomial_residual() == ParamPoly()
    rng = random.Random(8)
    for sv in (2, 4, 6):
        a, b, cv = (repmod.random_rational(rng) for _ in range(3))
        rep = repmod.recursion_suite(sv, a, b, cv, sv + 99)
        assert rep.gamma == repmod.gamma_from_relation(a, sv, cv)
        assert rep.passed, {n: str(r) for n, r in rep.residuals.items() if r}
        assert max(rep.residuals) == sv + 99
    criterion.done()


def test_9_trivial_quantization(criterion):
    criterion(9, "trivial quantization satisfies Q1 and Q2 on the cone", 30)
    m = repmod.build_module(Fraction(7, 3), 24)
    res = quantize.trivial_quantization_checks(m, pairs=200, seed=9, max_degree=4)
    assert res["Q2"]
    assert not res["Q1_failures"], res["Q1_failures"][:5]
    criterion.done()
