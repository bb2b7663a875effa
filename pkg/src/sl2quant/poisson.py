"""The Poisson algebra S(sl2)_C and its quotient by the Casimir level set.

A :class:`ClassicalPoly` is a commutative polynomial in ``h, ep, em`` with
:class:`~sl2quant.exactnum.ParamPoly` coefficients; the key ``(a, b, d)``
stands for ``h^a ep^b em^d``.  The bracket is the Lie bracket of the
standard triple extended by the Leibniz rule:

    {h, ep} = 2 ep,   {h, em} = -2 em,   {ep, em} = h.

The orbit ring is modelled as the quotient by the principal ideal generated
by ``h^2 + 4 ep em - c``.  Normal forms eliminate the mixed product
``ep*em`` in favour of ``(c - h^2)/4``.  For the nilpotent cone this is
the ideal of the full cone, which is the Zariski closure of either half
cone; whether the half-cone ideal is larger is not examined here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import GaussRational, ParamPoly, as_gauss
from .expr import BinOp, Bracket, Neg, Num, Pow, Sym, parse
from .linalg import rank

__all__ = [
    "ClassicalPoly",
    "OrbitElement",
    "GradedDecomposition",
    "GradingError",
    "CASIMIR",
    "h",
    "ep",
    "em",
    "pbracket",
    "orbit_reduce",
    "evaluate",
    "verify_identity",
    "graded_split",
    "casimir_centrality_check",
    "adjoint_cyclicity_check",
    "random_classical",
]

_GEN_INDEX = {"h": 0, "ep": 1, "em": 2}


class ClassicalPoly:
    """Polynomial in h, ep, em; keys are exponent triples ``(a, b, d)``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, v in terms.items():
                v = _as_param(v)
                if v:
                    self.terms[tuple(k)] = v

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, value):
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, a, b, d, coeff=1):
        return cls({(a, b, d): coeff})

    @classmethod
    def generator(cls, name):
        exps = [0, 0, 0]
        exps[_GEN_INDEX[name]] = 1
        return cls({tuple(exps): 1})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((sum(k) for k in self.terms), default=0)

    def is_homogeneous(self):
        return len({sum(k) for k in self.terms}) <= 1

    def is_constant(self):
        return not self.terms or set(self.terms) == {(0, 0, 0)}

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0, 0, 0), ParamPoly())

    def __eq__(self, other):
        if isinstance(other, ClassicalPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return ClassicalPoly._raw({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        other = _as_classical(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            w = v if w is None else w + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return ClassicalPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_classical(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_classical(other) - self

    def __mul__(self, other):
        other = _as_classical(other)
        if other is None:
            return NotImplemented
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                w = out.get(k)
                out[k] = v1 * v2 if w is None else w + v1 * v2
        return ClassicalPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a non-negative integer")
        out = ClassicalPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def substitute(self, bindings):
        """Substitute parameter values in every coefficient."""
        return ClassicalPoly({k: v.substitute(bindings) for k, v in self.terms.items()})

    def homogeneous_part(self, degree):
        return ClassicalPoly._raw({k: v for k, v in self.terms.items() if sum(k) == degree})

    def value_at(self, point, bindings=None):
        """Evaluate at ``point = (h, ep, em)`` with scalar parameter bindings."""
        hv, pv, mv = (as_gauss(x) for x in point)
        total = GaussRational(0)
        for (a, b, d), coeff in self.terms.items():
            cval = coeff.evaluate(bindings or {})
            total = total + cval * hv ** a * pv ** b * mv ** d
        return total

    def __repr__(self):
        return f"ClassicalPoly({self})"

    def __str__(self):
        return format_classical(self)


def _as_param(v):
    if isinstance(v, ParamPoly):
        return v
    return ParamPoly.const(v)


def _as_classical(x):
    if isinstance(x, ClassicalPoly):
        return x
    if isinstance(x, ParamPoly):
        return ClassicalPoly({(0, 0, 0): x})
    try:
        return ClassicalPoly.const(as_gauss(x))
    except TypeError:
        return None


h = ClassicalPoly.generator("h")
ep = ClassicalPoly.generator("ep")
em = ClassicalPoly.generator("em")
CASIMIR = h * h + 4 * ep * em


def format_classical(p):
    if not p.terms:
        return "0"
    names = ("h", "ep", "em")
    pieces = []
    for key in sorted(p.terms, key=lambda k: (-sum(k), [-e for e in k])):
        coeff = p.terms[key]
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, key) if e)
        cs = str(coeff)
        if not mono:
            pieces.append(f"({cs})" if len(coeff.terms) > 1 else cs)
        elif cs == "1":
            pieces.append(mono)
        elif cs == "-1":
            pieces.append(f"-{mono}")
        elif len(coeff.terms) > 1:
            pieces.append(f"({cs})*{mono}")
        else:
            pieces.append(f"{cs}*{mono}")
    return " + ".join(pieces).replace("+ -", "- ")


# {x, y} for x, y in (h, ep, em), as ClassicalPolys
_STRUCTURE = {
    (0, 1): 2 * ep,
    (1, 0): -2 * ep,
    (0, 2): -2 * em,
    (2, 0): 2 * em,
    (1, 2): h,
    (2, 1): -h,
}


def _partials(p):
    out = [{}, {}, {}]
    for k, v in p.terms.items():
        for i in range(3):
            e = k[i]
            if e:
                kk = list(k)
                kk[i] -= 1
                out[i][tuple(kk)] = v * e
    return [ClassicalPoly._raw(d) for d in out]


def pbracket(f, g):
    """Poisson bracket ``{f, g}`` extended from the triple by Leibniz."""
    f = _as_classical(f)
    g = _as_classical(g)
    df = _partials(f)
    dg = _partials(g)
    total = ClassicalPoly()
    for (i, j), s in _STRUCTURE.items():
        if df[i] and dg[j]:
            total = total + df[i] * dg[j] * s
    return total


def _casimir_poly(casimir):
    if casimir is None or casimir == "c":
        return ParamPoly.var("c")
    if isinstance(casimir, ParamPoly):
        return casimir
    return ParamPoly.const(as_gauss(casimir))


class OrbitElement:
    """Canonical representative of a class in S(sl2)/(h^2 + 4 ep em - c)."""

    __slots__ = ("rep", "casimir_value")

    def __init__(self, rep, casimir_value):
        self.rep = rep
        self.casimir_value = casimir_value

    def is_zero(self):
        return self.rep.is_zero()

    def __eq__(self, other):
        if isinstance(other, OrbitElement):
            return self.rep == other.rep and self.casimir_value == other.casimir_value
        return NotImplemented

    def __hash__(self):
        return hash((self.rep, self.casimir_value))

    def __repr__(self):
        return f"OrbitElement({self.rep}; c = {self.casimir_value})"

    def __str__(self):
        return str(self.rep)


def orbit_reduce(f, casimir="c"):
    """Normal form modulo the Casimir relation.

    Every factor ``ep*em`` is replaced by ``(c - h^2)/4``; ``casimir`` is
    ``"c"`` for the formal parameter or a scalar value.  Any ``c`` appearing
    in the coefficients is bound to the same value.
    """
    f = _as_classical(f)
    cval = _casimir_poly(casimir)
    if not (cval == ParamPoly.var("c")):
        f = f.substitute({"c": cval})
    half = ClassicalPoly({(0, 0, 0): cval, (2, 0, 0): -1}) * Fraction(1, 4)
    powers = [ClassicalPoly.const(1)]
    out = ClassicalPoly()
    for (a, b, d), v in f.terms.items():
        k = min(b, d)
        if not k:
            out = out + ClassicalPoly._raw({(a, b, d): v})
            continue
        while len(powers) <= k:
            powers.append(powers[-1] * half)
        shifted = ClassicalPoly._raw({(a, b - k, d - k): v})
        out = out + shifted * powers[k]
    return OrbitElement(out, cval)


def evaluate(tree, bindings=None):
    """Evaluate a classical expression tree (or text) to a ClassicalPoly.

    Scalar symbols become ParamPoly coefficients; ``bindings`` optionally
    substitutes values for them.
    """
    if isinstance(tree, str):
        tree = parse(tree, "classical")
    out = _eval(tree)
    if bindings:
        out = out.substitute(bindings)
    return out


def _eval(node):
    if isinstance(node, Num):
        return ClassicalPoly.const(node.value)
    if isinstance(node, Sym):
        if node.name in _GEN_INDEX:
            return ClassicalPoly.generator(node.name)
        if node.name == "i":
            return ClassicalPoly.const(GaussRational(0, 1))
        return ClassicalPoly({(0, 0, 0): ParamPoly.var(node.name)})
    if isinstance(node, Neg):
        return -_eval(node.operand)
    if isinstance(node, Pow):
        return _eval(node.base) ** node.exponent
    if isinstance(node, BinOp):
        left = _eval(node.left)
        right = _eval(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return left * _scalar_inverse(right)
    if isinstance(node, Bracket) and node.kind == "poisson":
        return pbracket(_eval(node.left), _eval(node.right))
    raise TypeError(f"cannot evaluate {node!r} classically")


def _scalar_inverse(p):
    if not p.is_constant():
        raise ValueError("division only by constants")
    val = p.constant_value()
    if not val.is_constant():
        raise ValueError("division only by numeric constants, not parameters")
    return val.constant_value().inverse()


@dataclass
class IdentityReport:
    name: str
    lhs: str
    rhs: str
    casimir: str
    residual: OrbitElement
    holds: bool = field(init=False)

    def __post_init__(self):
        self.holds = self.residual.is_zero()


def verify_identity(lhs, rhs, casimir="c", name="identity"):
    """Reduce ``lhs - rhs`` on the orbit and report the exact residual."""
    from .expr import unparse

    lt = parse(lhs, "classical") if isinstance(lhs, str) else lhs
    rt = parse(rhs, "classical") if isinstance(rhs, str) else rhs
    diff = _eval(lt) - _eval(rt)
    residual = orbit_reduce(diff, casimir)
    return IdentityReport(name, unparse(lt), unparse(rt), str(_casimir_poly(casimir)), residual)


class GradingError(ValueError):
    """Homogeneous components requested on an orbit with c != 0."""


@dataclass
class GradedDecomposition:
    components: dict

    def total(self):
        out = ClassicalPoly()
        for comp in self.components.values():
            out = out + comp.rep
        return out

    def __getitem__(self, degree):
        return self.components[degree]


def graded_split(f, casimir=0):
    """Split ``f`` into homogeneous components on the nilpotent cone."""
    cval = _casimir_poly(casimir)
    if not cval.is_constant() or cval.constant_value():
        raise GradingError(f"grading is only defined for c = 0, got c = {cval}")
    reduced = orbit_reduce(f, 0).rep
    comps = {}
    for key, v in reduced.terms.items():
        comps.setdefault(sum(key), {})[key] = v
    return GradedDecomposition(
        {deg: OrbitElement(ClassicalPoly._raw(t), cval) for deg, t in sorted(comps.items())}
    )


def random_classical(rng, max_degree=4, n_terms=4, params=False, coeff_range=5):
    """Random ClassicalPoly with small rational (optionally parametric) coefficients."""
    terms = {}
    for _ in range(n_terms):
        deg = rng.randint(0, max_degree)
        a = rng.randint(0, deg)
        b = rng.randint(0, deg - a)
        key = (a, b, deg - a - b)
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.randint(1, 3)
        coeff = ParamPoly.const(Fraction(num, den))
        if params and rng.random() < 0.3:
            coeff = coeff * ParamPoly.var(rng.choice(["alpha", "c", "C"]))
        terms[key] = terms.get(key, ParamPoly()) + coeff
    return ClassicalPoly(terms)


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict


def casimir_centrality_check(trials=100, seed=0, max_degree=4):
    """``{h^2 + 4 ep em, f}`` reduces to zero for random ``f``."""
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        f = random_classical(rng, max_degree=max_degree, params=True)
        res = orbit_reduce(pbracket(CASIMIR, f))
        if not res.is_zero():
            failures.append((t, str(f), str(res)))
    return CheckReport("casimir_centrality", not failures, {"trials": trials, "failures": failures})


def _cone_basis(l):
    """Monomials of degree ``l`` with no mixed ep*em factor."""
    out = [(l, 0, 0)]
    for j in range(1, l + 1):
        out.append((l - j, j, 0))
        out.append((l - j, 0, j))
    return out


def adjoint_cyclicity_check(l):
    """Is ``h^l`` a cyclic vector for ad(sl2) on the degree-l cone component?

    Brackets with the generators are applied until the span stops growing;
    the span's exact rank is compared with ``dim P_l = 2l + 1``.
    """
    if l < 0:
        raise ValueError("degree must be non-negative")
    gens = (h, ep, em)
    start = orbit_reduce(h ** l, 0).rep
    span = [_as_vector(start.terms)]
    frontier = [start]
    while frontier:
        grown = []
        for f in frontier:
            for g in gens:
                v = orbit_reduce(pbracket(g, f), 0).rep
                if v and rank(span + [_as_vector(v.terms)]) > len(span):
                    span.append(_as_vector(v.terms))
                    grown.append(v)
        frontier = grown
    dim = len(_cone_basis(l))
    return CheckReport(
        "adjoint_cyclicity",
        len(span) == dim,
        {"degree": l, "span_dimension": len(span), "dim_P_l": dim},
    )


def _as_vector(terms):
    return {k: v.constant_value() for k, v in terms.items()}
