"""Polynomial quantization maps on the orbit ring and their consistency.

The chain of derivations is:

1. :func:`derive_qh2` shows that Q(h^2) commutes with H, so it is a
   polynomial in H, and then that the bracket rule applied to
   ``3h^2 - 1/2 {{h^2, em}, ep} = c`` forces ``Q(h^2) = alpha H^2 + gamma I``
   with ``3 gamma = c - alpha C``.
2. :func:`extend_to_degree2` quantizes the degree-2 monomials through the
   identities that express them as brackets.
3. :func:`derive_constraints` quantizes two cubic identities and reads off
   the polynomial conditions on ``alpha``, ``C`` and ``c``.
4. :func:`case_analysis` decides them: only ``alpha = 0`` survives on the
   nilpotent cone (c = 0), and nothing survives for c != 0.

Axioms beyond the bracket rule and Q(1) = I enter only as recorded side
conditions: faithfulness gives H != 0 and normal-form basis independence gives
(H, Ep - Em) != 0; irreducibility is why the Casimir is the scalar C.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import poisson
from .enveloping import ONE, Em, Ep, H, NcPoly, basis_enumerate, eval_in_module, nc_commutator, nc_sym
from .exactnum import GaussRational, ParamPoly, solve_linear
from .expr import BinOp, Bracket, Neg, Num, Pow, Sym, parse, unparse
from .linalg import SparseMatrix

__all__ = [
    "QuantMap",
    "ConstraintSet",
    "QuantizationDomainError",
    "load_identities",
    "quantize_expression",
    "commutant_of_H",
    "derive_qh2",
    "extend_to_degree2",
    "expected_degree2",
    "derive_constraints",
    "case_analysis",
    "triviality_propagation",
    "trivial_quantization",
    "trivial_quantization_checks",
    "degree2_bracket_rule_check",
]

_I = GaussRational(0, 1)
alpha = ParamPoly.var("alpha")
gamma = ParamPoly.var("gamma")
C = ParamPoly.var("C")
c = ParamPoly.var("c")
s = ParamPoly.var("s")

# 3 gamma = c - alpha C, written as "== 0"
GAMMA_RELATION = 3 * gamma + alpha * C - c


def load_identities():
    """The classical identities used by the derivations, as grammar text."""
    text = resources.files("sl2quant.data").joinpath("identities.json").read_text()
    return json.loads(text)


class QuantizationDomainError(KeyError):
    """A classical monomial has no assigned quantization."""


_DEGREE1 = {
    (0, 0, 0): ONE,
    (1, 0, 0): H,
    (0, 1, 0): Ep,
    (0, 0, 1): Em,
}

_MONO_NAMES = {
    (0, 0, 0): "1",
    (1, 0, 0): "h",
    (0, 1, 0): "ep",
    (0, 0, 1): "em",
    (2, 0, 0): "h^2",
    (1, 1, 0): "h*ep",
    (1, 0, 1): "h*em",
    (0, 2, 0): "ep^2",
    (0, 0, 2): "em^2",
    (0, 1, 1): "ep*em",
}


@dataclass
class QuantMap:
    """Linear map on classical monomials given by its values on a basis.

    ``relations`` lists ParamPolys assumed to vanish (e.g. the relation
    tying gamma to alpha, C and c).
    """

    assignments: dict = field(default_factory=lambda: dict(_DEGREE1))
    relations: list = field(default_factory=list)

    def assign(self, monomial, value):
        self.assignments[tuple(monomial)] = value

    def domain(self):
        return set(self.assignments)

    def apply(self, f):
        """Quantize a ClassicalPoly monomial by monomial."""
        out = NcPoly()
        for key, coeff in f.terms.items():
            q = self.assignments.get(key)
            if q is None:
                a, b, d = key
                raise QuantizationDomainError(f"no quantization assigned to h^{a} ep^{b} em^{d}")
            out = out + q * coeff
        return out

    def describe(self):
        return {_MONO_NAMES.get(k, str(k)): str(v) for k, v in sorted(self.assignments.items(), key=lambda kv: (sum(kv[0]), kv[0]))}


def _has_bracket(node):
    if isinstance(node, Bracket):
        return True
    if isinstance(node, (Num, Sym)):
        return False
    if isinstance(node, Neg):
        return _has_bracket(node.operand)
    if isinstance(node, Pow):
        return _has_bracket(node.base)
    if isinstance(node, BinOp):
        return _has_bracket(node.left) or _has_bracket(node.right)
    raise TypeError(f"unexpected node {node!r}")


def _scalar_of(node):
    """ParamPoly value of a bracket-free subtree that is a constant."""
    if _has_bracket(node):
        return None
    f = poisson.evaluate(node)
    return f.constant_value() if f.is_constant() else None


def quantize_expression(tree, qmap):
    """Apply Q to a classical tree using the bracket rule.

    ``{f, g}`` becomes ``i [Q(f), Q(g)]``; bracket-free subtrees are expanded
    and mapped through ``qmap``; sums and scalar multiples are linear.  A
    product of two non-scalar factors one of which contains a bracket has no
    prescribed quantization and is rejected.
    """
    if isinstance(tree, str):
        tree = parse(tree, "classical")
    return _quantize(tree, qmap)


def _quantize(node, qmap):
    if not _has_bracket(node):
        return qmap.apply(poisson.evaluate(node))
    if isinstance(node, Bracket):
        return nc_commutator(_quantize(node.left, qmap), _quantize(node.right, qmap)) * _I
    if isinstance(node, Neg):
        return -_quantize(node.operand, qmap)
    if isinstance(node, BinOp):
        if node.op == "+":
            return _quantize(node.left, qmap) + _quantize(node.right, qmap)
        if node.op == "-":
            return _quantize(node.left, qmap) - _quantize(node.right, qmap)
        if node.op == "*":
            k = _scalar_of(node.left)
            if k is not None:
                return _quantize(node.right, qmap) * k
            k = _scalar_of(node.right)
            if k is not None:
                return _quantize(node.left, qmap) * k
            raise ValueError(f"product {unparse(node)} is not linear in brackets")
        if node.op == "/":
            k = _scalar_of(node.right)
            if k is None or not k.is_constant() or not k.constant_value():
                raise ValueError("division only by nonzero numeric constants")
            return _quantize(node.left, qmap) * k.constant_value().inverse()
    raise ValueError(f"cannot quantize {unparse(node)}: power of a bracket")


def _unknown_name(j, t):
    return f"x_{j}_{'p' if t >= 0 else 'm'}{abs(t)}"


def commutant_of_H(r):
    """Solve [X, H] = 0 for X in the span of the degree-r basis.

    Returns the basis monomials whose coefficients stay free; the expected
    answer is exactly the powers H^0, ..., H^r.
    """
    basis = basis_enumerate(r)
    names = [_unknown_name(j, t) for j, t in basis]
    X = NcPoly({(j, t): ParamPoly.var(n) for (j, t), n in zip(basis, names)})
    comm = nc_commutator(X, H)
    sol = solve_linear(list(comm.terms.values()), names)
    free = [b for b, n in zip(basis, names) if n in sol.free]
    return free, sol


@dataclass
class QH2Result:
    max_degree: int
    commutant: list
    forced: NcPoly
    gamma_relation: ParamPoly
    coefficients: dict
    leading_factors: dict
    solution: object

    def eq_gamma_in_s(self):
        """The gamma relation after binding C = 1 - s^2."""
        return self.gamma_relation.substitute({"C": 1 - s * s})

    def as_dict(self):
        return {
            "max_degree": self.max_degree,
            "commutant": [_nc_mono_name(j, t) for j, t in self.commutant],
            "Q(h^2)": str(self.forced),
            "gamma_relation": f"{self.gamma_relation} = 0",
            "gamma_relation_in_s": f"{self.eq_gamma_in_s()} = 0",
            "coefficients": {k: str(v) for k, v in self.coefficients.items()},
            "leading_factors": {str(k): str(v) for k, v in self.leading_factors.items()},
        }


def _nc_mono_name(j, t):
    return str(NcPoly.monomial(j, t)) if (j, t) != (0, 0) else "I"


def derive_qh2(max_degree=2):
    """Force the form of Q(h^2) from an H-only ansatz of degree ``max_degree``."""
    r = max_degree
    if r < 2:
        raise ValueError("the ansatz degree must be at least 2")
    commutant, _ = commutant_of_H(r)
    coeff_names = [f"a{k}" for k in range(r + 1)]
    ansatz = NcPoly({(k, 0): ParamPoly.var(n) for k, n in enumerate(coeff_names)})
    qmap = QuantMap()
    qmap.assign((2, 0, 0), ansatz)
    ids = load_identities()["h2_level"]
    lhs = quantize_expression(ids["lhs"], qmap)
    rhs = quantize_expression(ids["rhs"], qmap)
    residual = lhs - rhs
    # the H^r coefficient carries (3 - r(r+1)/2) a_r
    leading = {k: residual.coefficient(k, 0).coefficient(f"a{k}", 1) for k in range(r + 1)}
    # a2 is pivoted last: its leading factor 3 - 3 vanishes, so it stays free
    order = [n for n in reversed(coeff_names) if n != "a2"] + ["a2"]
    sol = solve_linear(list(residual.terms.values()), order)
    if not sol.consistent:
        raise ArithmeticError(f"ansatz system is inconsistent: {sol}")
    bind = {"a2": alpha}
    values = {}
    for n in coeff_names:
        if n in sol.free:
            values[n] = ParamPoly.var(n).substitute(bind)
        else:
            values[n] = sol.value(n).substitute(bind)
    forced = NcPoly({(k, 0): values[f"a{k}"] for k in range(r + 1)})
    a0 = values["a0"]
    # gamma := a0, so the relation reads 3 gamma - 3 a0 = 0 with a0 = (c - alpha C)/3
    gamma_relation = 3 * gamma - 3 * a0
    forced_named = NcPoly({(2, 0): values["a2"], (0, 0): gamma}) if _only_h2_and_1(forced) else forced
    return QH2Result(r, commutant, forced_named, gamma_relation, values, leading, sol)


def _only_h2_and_1(p):
    return set(p.terms) <= {(2, 0), (0, 0)}


def _verify_classical(name, ids):
    entry = ids[name]
    rep = poisson.verify_identity(entry["lhs"], entry["rhs"], entry.get("casimir", "c"), name)
    if not rep.holds:
        raise ArithmeticError(f"classical identity {name} fails: residual {rep.residual}")
    return rep


def extend_to_degree2(qh2=None):
    """Quantize every degree-2 monomial via its defining bracket identity."""
    ids = load_identities()
    if qh2 is None:
        qh2 = derive_qh2(2)
    qmap = QuantMap(relations=[qh2.gamma_relation])
    qmap.assign((2, 0, 0), qh2.forced)
    steps = []
    for name, key in (
        ("h_ep", (1, 1, 0)),
        ("h_em", (1, 0, 1)),
        ("ep_sq", (0, 2, 0)),
        ("em_sq", (0, 0, 2)),
        ("ep_em", (0, 1, 1)),
    ):
        _verify_classical(name, ids)
        value = quantize_expression(ids[name]["rhs"], qmap)
        qmap.assign(key, value)
        steps.append((name, _MONO_NAMES[key], value))
    qmap.steps = steps
    return qmap


def expected_degree2():
    """The closed forms alpha(H,E), alpha E^2 and alpha(Ep,Em) + gamma/2."""
    return {
        (1, 1, 0): nc_sym(H, Ep) * alpha,
        (1, 0, 1): nc_sym(H, Em) * alpha,
        (0, 2, 0): (Ep * Ep) * alpha,
        (0, 0, 2): (Em * Em) * alpha,
        (0, 1, 1): nc_sym(Ep, Em) * alpha + ONE * (gamma * Fraction(1, 2)),
    }


@dataclass
class ConstraintSet:
    equations: list
    labels: list
    side_conditions: list
    verdict: str = "undetermined"
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "equations": {lab: f"{eq} = 0" for lab, eq in zip(self.labels, self.equations)},
            "side_conditions": list(self.side_conditions),
            "verdict": self.verdict,
        }


def _project(residual, direction):
    """Write ``residual = lam * direction + rest`` using the leading monomial."""
    key = max(direction.terms, key=lambda k: (k[0] + abs(k[1]), k))
    d = direction.terms[key].constant_value()
    lam = residual.coefficient(*key) * d.inverse()
    rest = residual - direction * lam
    return lam, rest


def derive_constraints(qmap=None):
    """Quantize the two cubic identities and extract the conditions."""
    ids = load_identities()
    if qmap is None:
        qmap = extend_to_degree2()
    details = {}
    for name in ("cubic_h", "cubic_ladder"):
        _verify_classical(name, ids)

    r1 = quantize_expression(ids["cubic_h"]["lhs"], qmap) - quantize_expression(ids["cubic_h"]["rhs"], qmap)
    lam1, rest1 = _project(r1, H)
    r2 = quantize_expression(ids["cubic_ladder"]["lhs"], qmap) - quantize_expression(ids["cubic_ladder"]["rhs"], qmap)
    direction = nc_sym(H, Ep - Em)
    lam2, rest2 = _project(r2, direction)

    eq1 = lam1.monic()
    eq2 = lam2.monic()
    details["cubic_h"] = {
        "residual": str(r1),
        "coefficient_of_H": str(lam1),
        "other_coefficients_zero": rest1.is_zero(),
    }
    details["cubic_ladder"] = {
        "residual": str(r2),
        "coefficient_of_(H,Ep-Em)": str(lam2),
        "other_coefficients_zero": rest2.is_zero(),
    }
    return ConstraintSet(
        [eq1, eq2],
        ["cubic_h: coefficient of H", "cubic_ladder: coefficient of (H, Ep - Em)"],
        ["H != 0 (faithfulness)", "(H, Ep - Em) != 0 (normal-form basis independence)"],
        details=details,
    )


# --- case analysis ------------------------------------------------------------


@dataclass
class Branch:
    status: str  # consistent | inconsistent | undetermined
    substitutions: dict
    nonzero: list
    log: list
    remaining: list = field(default_factory=list)


_MAX_STEPS = 64


def _split_branches(eqs, subs, nonzero, log):
    eqs = list(eqs)
    for _ in range(_MAX_STEPS):
        eqs = [e.substitute(subs) for e in eqs]
        eqs = [e for e in eqs if e]
        if not eqs:
            return [Branch("consistent", dict(subs), sorted(nonzero), log)]
        for e in eqs:
            if e.is_constant():
                return [Branch("inconsistent", dict(subs), sorted(nonzero), log + [f"{e} = 0 is impossible"])]
        # monomial factors: branch on unknown ones, cancel assumed-nonzero ones
        progressed = False
        for idx, e in enumerate(eqs):
            content = e.monomial_content()
            if not content:
                continue
            open_vars = [v for v in content if v not in nonzero]
            if open_vars:
                v = open_vars[0]
                k = content[v]
                cofactor = e.divide_monomial({v: k})
                factor = f"{v}^{k}" if k > 1 else v
                head = f"{e} = 0 factors as {factor} * ({cofactor})"
                zero = _split_branches(eqs, {**subs, v: ParamPoly()}, nonzero, log + [head, f"case {v} = 0"])
                rest = eqs[:idx] + [cofactor] + eqs[idx + 1 :]
                nz = _split_branches(rest, subs, nonzero | {v}, log + [head, f"case {v} != 0: {cofactor} = 0"])
                return zero + nz
            reduced = e.divide_monomial(content)
            log = log + [f"cancel nonzero factor in {e} = 0, leaving {reduced} = 0"]
            eqs[idx] = reduced
            progressed = True
            break
        if progressed:
            continue
        # linear in an unknown with a constant coefficient
        for e in eqs:
            target = None
            for v in e.variables():
                if v in nonzero or e.degree_in(v) != 1:
                    continue
                coeff = e.coefficient(v, 1)
                if coeff.is_constant():
                    target = (v, coeff.constant_value())
                    break
            if target:
                v, k = target
                value = -(e - ParamPoly.var(v) * k) * k.inverse()
                subs = {name: val.substitute({v: value}) for name, val in subs.items()}
                subs[v] = value
                log = log + [f"{e} = 0 gives {v} = {value}"]
                progressed = True
                break
        if progressed:
            continue
        # cancel a leading term against another equation
        for a in eqs:
            lm_a, lc_a = a.leading_term()
            for bi, b in enumerate(eqs):
                if a is b:
                    continue
                lm_b, lc_b = b.leading_term()
                quotient = _mono_quotient(lm_b, lm_a)
                if quotient is None:
                    continue
                new = b - a * ParamPoly({quotient: lc_b * lc_a.inverse()})
                log = log + [f"({b}) - ({ParamPoly({quotient: lc_b * lc_a.inverse()})})*({a}) = {new}"]
                eqs[bi] = new
                progressed = True
                break
            if progressed:
                break
        if not progressed:
            return [Branch("undetermined", dict(subs), sorted(nonzero), log, [str(e) for e in eqs])]
    return [Branch("undetermined", dict(subs), sorted(nonzero), log + ["step limit reached"], [str(e) for e in eqs])]


def _mono_quotient(num, den):
    d = dict(num)
    for name, e in den:
        left = d.get(name, 0) - e
        if left < 0:
            return None
        if left:
            d[name] = left
        else:
            d.pop(name)
    return tuple(d.items())


@dataclass
class Verdict:
    verdict: str
    casimir: str
    branches: list
    alpha: object
    gamma: object
    narrative: list

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "casimir": self.casimir,
            "alpha": None if self.alpha is None else str(self.alpha),
            "gamma": None if self.gamma is None else str(self.gamma),
            "branches": [
                {
                    "status": b.status,
                    "substitutions": {k: str(v) for k, v in b.substitutions.items()},
                    "assumed_nonzero": b.nonzero,
                    "steps": b.log,
                    "remaining": b.remaining,
                }
                for b in self.branches
            ],
            "narrative": self.narrative,
        }


def case_analysis(constraints, c_is_zero):
    """Decide the constraint system on the nilpotent cone or off it."""
    eqs = list(constraints.equations)
    if c_is_zero:
        eqs = [e.substitute({"c": 0}) for e in eqs]
        nonzero = frozenset()
        start = ["nilpotent orbit: c = 0"]
    else:
        nonzero = frozenset({"c"})
        start = ["semisimple orbit: c != 0"]
    branches = _split_branches(eqs, {}, nonzero, start)
    live = [b for b in branches if b.status != "inconsistent"]
    a_val = g_val = None
    if not live:
        verdict = "inconsistent"
        narrative = start + ["every branch ends in a contradiction: there is no polynomial quantization"]
    elif all(b.status == "consistent" and b.substitutions.get("alpha") == ParamPoly() for b in live):
        verdict = "consistent_trivial"
        a_val = ParamPoly()
        c_val = ParamPoly() if c_is_zero else c
        # gamma from 3 gamma = c - alpha C
        g_val = (c_val - a_val * C) * Fraction(1, 3)
        narrative = start + [
            "every surviving branch forces alpha = 0",
            f"then 3 gamma = c - alpha C gives gamma = {g_val}",
            "so Q(h^2) = alpha H^2 + gamma I = 0",
        ]
    else:
        verdict = "undetermined"
        narrative = start + ["some branch could not be decided"]
    constraints.verdict = verdict
    return Verdict(verdict, "0" if c_is_zero else "c", branches, a_val, g_val, narrative)


def triviality_propagation(l_max=6):
    """Classical links showing Q vanishes on every degree >= 2 component."""
    ids = load_identities()
    links = []
    cyc2 = poisson.adjoint_cyclicity_check(2)
    links.append({"link": "h^2 is ad-cyclic in P_2", "passed": cyc2.passed, **cyc2.details})
    template = ids["h_power"]
    for l in range(2, l_max + 1):
        lhs = template["lhs"].replace("{l}", str(l))
        rhs = template["rhs"].replace("{l-2}", str(l - 2)).replace("{2l+2}", str(2 * l + 2))
        rep = poisson.verify_identity(lhs, rhs, 0, f"h^{l}")
        links.append({"link": f"h^{l} = 1/{2 * l + 2} {{{{h^2, h^{l - 2} ep}}, em}}", "passed": rep.holds, "residual": str(rep.residual)})
        if l == 2:
            continue
        cyc = poisson.adjoint_cyclicity_check(l)
        links.append({"link": f"h^{l} is ad-cyclic in P_{l}", "passed": cyc.passed, **cyc.details})
    passed = all(x["passed"] for x in links)
    return {"passed": passed, "l_max": l_max, "links": links}


# --- the trivial quantization on the cone -------------------------------------

_GEN_NC = {(1, 0, 0): H, (0, 1, 0): Ep, (0, 0, 1): Em}


def trivial_quantization(f, module, bindings=None, casimir=0):
    """Q = pi on constants and sl2, and 0 on every component of degree >= 2."""
    parts = poisson.graded_split(f, casimir)
    out = SparseMatrix.zeros(module.levels)
    if 0 in parts.components:
        k = parts[0].rep.terms[(0, 0, 0)].evaluate(bindings or {})
        out = out + module.identity().scale(k)
    if 1 in parts.components:
        lin = NcPoly()
        for key, coeff in parts[1].rep.terms.items():
            lin = lin + _GEN_NC[key] * coeff
        out = out + eval_in_module(lin, module, bindings)
    return out


def trivial_quantization_checks(module, pairs=200, seed=0, max_degree=4):
    """Q(1) = I and the bracket rule for random pairs on margin-1 columns."""
    rng = random.Random(seed)
    cols = set(module.interior(1))
    q2 = trivial_quantization(poisson.ClassicalPoly.const(1), module) == module.identity()
    failures = []
    for t in range(pairs):
        f = poisson.random_classical(rng, max_degree=max_degree, n_terms=5)
        g = poisson.random_classical(rng, max_degree=max_degree, n_terms=5)
        lhs = trivial_quantization(poisson.pbracket(f, g), module)
        qf = trivial_quantization(f, module)
        qg = trivial_quantization(g, module)
        rhs = (qf @ qg - qg @ qf).scale(_I)
        if (lhs - rhs).restrict_columns(cols).entries:
            failures.append(t)
    return {"Q2": q2, "pairs": pairs, "Q1_failures": failures, "passed": q2 and not failures}


def degree2_bracket_rule_check(qmap=None):
    """Q({f, g}) = i[Q(f), Q(g)] for all basis monomials with deg {f, g} <= 2."""
    if qmap is None:
        qmap = extend_to_degree2()
    keys = sorted(qmap.domain(), key=lambda k: (sum(k), k))
    results = []
    for f in keys:
        for g in keys:
            if sum(f) + sum(g) - 1 > 2:
                continue
            fp = poisson.ClassicalPoly.monomial(*f)
            gp = poisson.ClassicalPoly.monomial(*g)
            lhs = qmap.apply(poisson.pbracket(fp, gp))
            rhs = nc_commutator(qmap.apply(fp), qmap.apply(gp)) * _I
            results.append((_MONO_NAMES[f], _MONO_NAMES[g], lhs == rhs))
    return results
