"""Exact scalars: Gaussian rationals and polynomials in the formal parameters.

Rationals are :class:`fractions.Fraction`.  :class:`GaussRational` adds the
imaginary unit, and :class:`ParamPoly` is a sparse multivariate polynomial
over Q(i).  The six model parameters are ``alpha, beta, gamma, C, c, s``;
auxiliary unknowns (ansatz coefficients, a symbolic index ``n``) are
allowed and sort after them.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "PARAMETERS",
    "GaussRational",
    "ParamPoly",
    "LinearSolution",
    "NonlinearError",
    "I",
    "as_gauss",
    "param",
    "solve_linear",
]

PARAMETERS = ("alpha", "beta", "gamma", "C", "c", "s")
_PARAM_RANK = {name: k for k, name in enumerate(PARAMETERS)}
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _var_key(name):
    return (_PARAM_RANK.get(name, len(PARAMETERS)), name)


class GaussRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re, im):
        g = object.__new__(cls)
        g.re = re
        g.im = im
        return g

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussRational._raw(-self.re, -self.im)

    def __add__(self, other):
        if not isinstance(other, GaussRational):
            other = as_gauss(other)
        return GaussRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussRational):
            other = as_gauss(other)
        return GaussRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gauss(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussRational):
            if isinstance(other, ParamPoly):
                return NotImplemented
            other = as_gauss(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussRational._raw(a * c, b)
        return GaussRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussRational._raw(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def inverse(self):
        nrm = self.norm()
        if not nrm:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational._raw(self.re / nrm, -self.im / nrm)

    def __truediv__(self, other):
        if not isinstance(other, GaussRational):
            other = as_gauss(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_gauss(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers")
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussRational._raw(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_real(self):
        return self.im == 0

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return _fmt_gauss(self)


I = GaussRational(0, 1)
_ONE = GaussRational(1)
_ZERO = GaussRational(0)


def as_gauss(x):
    """Coerce an int, Fraction, complex with integral parts or GaussRational."""
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussRational(Fraction(x))
    if isinstance(x, complex):
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise TypeError("refusing inexact complex value")
        return GaussRational(int(x.real), int(x.imag))
    if isinstance(x, str):
        return GaussRational(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to GaussRational")


def _fmt_frac(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_gauss(g):
    if g.im == 0:
        return _fmt_frac(g.re)
    if g.re == 0:
        if g.im == 1:
            return "i"
        if g.im == -1:
            return "-i"
        return f"{_fmt_frac(g.im)}*i"
    sign = "-" if g.im < 0 else "+"
    im = abs(g.im)
    im_s = "i" if im == 1 else f"{_fmt_frac(im)}*i"
    return f"({_fmt_frac(g.re)} {sign} {im_s})"


class ParamPoly:
    """Sparse polynomial over Q(i) in named commuting variables.

    A monomial is a tuple of ``(name, exponent)`` pairs sorted by the fixed
    variable order.  Instances are treated as immutable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = as_gauss(coeff)
                if coeff:
                    clean[_canon_mono(mono)] = coeff
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, value):
        g = as_gauss(value)
        return cls._raw({(): g} if g else {})

    @classmethod
    def var(cls, name, power=1):
        if not _NAME_RE.match(name):
            raise ValueError(f"bad variable name {name!r}")
        if power == 0:
            return cls.const(1)
        return cls._raw({((name, power),): GaussRational(1)})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self):
        """The value of a constant polynomial; raises if not constant."""
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get((), _ZERO)

    def variables(self):
        out = set()
        for mono in self.terms:
            out.update(name for name, _ in mono)
        return sorted(out, key=_var_key)

    def degree_in(self, name):
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def total_degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.terms == other.terms
        try:
            other = as_gauss(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(): other} if other else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self):
        return ParamPoly._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return ParamPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, ParamPoly):
            pass
        elif isinstance(other, (GaussRational, int, Rational)):
            g = as_gauss(other)
            if not g:
                return ParamPoly._raw({})
            return ParamPoly._raw({m: c * g for m, c in self.terms.items()})
        else:
            return NotImplemented
        if not self.terms or not other.terms:
            return ParamPoly._raw({})
        if len(other.terms) == 1 and () in other.terms:
            return self * other.terms[()]
        if len(self.terms) == 1 and () in self.terms:
            return other * self.terms[()]
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return ParamPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("ParamPoly powers must be non-negative integers")
        result = ParamPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, g):
        return self * as_gauss(g)

    def __truediv__(self, other):
        # only division by nonzero scalars; see factor helpers for the rest
        if isinstance(other, ParamPoly):
            other = other.constant_value()
        g = as_gauss(other)
        return self * g.inverse()

    def substitute(self, bindings):
        """Evaluate the bound variables; unbound ones stay formal.

        ``bindings`` maps variable names to scalars or ParamPolys.
        """
        if not bindings:
            return self
        out = ParamPoly._raw({})
        cache = {}
        for mono, coeff in self.terms.items():
            free = []
            factor = ParamPoly.const(coeff)
            for name, e in mono:
                if name in bindings:
                    key = (name, e)
                    val = cache.get(key)
                    if val is None:
                        val = _coerce(bindings[name]) ** e
                        cache[key] = val
                    factor = factor * val
                else:
                    free.append((name, e))
            if free:
                factor = factor * ParamPoly._raw({tuple(free): _ONE})
            out = out + factor
        return out

    def evaluate(self, bindings):
        """Full evaluation to a GaussRational; every variable must be bound."""
        missing = [v for v in self.variables() if v not in bindings]
        if missing:
            raise KeyError(f"unbound variables: {', '.join(missing)}")
        total = _ZERO
        for mono, coeff in self.terms.items():
            term = coeff
            for name, e in mono:
                term = term * as_gauss(bindings[name]) ** e
            total = total + term
        return total

    def coefficient(self, name, power):
        """Coefficient of ``name**power`` viewed as a polynomial in ``name``."""
        out = {}
        for mono, coeff in self.terms.items():
            d = dict(mono)
            if d.get(name, 0) == power:
                d.pop(name, None)
                out[_canon_mono(tuple(d.items()))] = coeff
        return ParamPoly._raw(out)

    def monomial_content(self):
        """Largest monomial dividing every term, as a name->exponent dict."""
        if not self.terms:
            return {}
        monos = [dict(m) for m in self.terms]
        common = dict(monos[0])
        for d in monos[1:]:
            for name in list(common):
                e = min(common[name], d.get(name, 0))
                if e:
                    common[name] = e
                else:
                    del common[name]
        return common

    def divide_monomial(self, mono):
        """Exact division by a monomial given as a name->exponent dict."""
        out = {}
        for m, coeff in self.terms.items():
            d = dict(m)
            for name, e in mono.items():
                left = d.get(name, 0) - e
                if left < 0:
                    raise ValueError("monomial does not divide polynomial")
                if left:
                    d[name] = left
                else:
                    d.pop(name, None)
            out[_canon_mono(tuple(d.items()))] = coeff
        return ParamPoly._raw(out)

    def sorted_terms(self):
        """Terms in graded order, highest total degree first."""
        return sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]))

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    def monic(self):
        """Scale so the leading coefficient (graded order) is 1."""
        if not self.terms:
            return self
        return self * self.leading_term()[1].inverse()

    def __repr__(self):
        return f"ParamPoly({self})"

    def __str__(self):
        return format_poly(self)


def _canon_mono(mono):
    if not mono:
        return ()
    merged = {}
    for name, e in mono:
        if e:
            merged[name] = merged.get(name, 0) + e
    return tuple(sorted(((n, e) for n, e in merged.items() if e), key=lambda t: _var_key(t[0])))


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for name, e in m2:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items(), key=lambda t: _var_key(t[0])))


def _mono_sort_key(mono):
    deg = sum(e for _, e in mono)
    # within a degree: lexicographic in the fixed variable order, larger exponents first
    exps = tuple(-e for _, e in mono)
    names = tuple(_var_key(n) for n, _ in mono)
    return (-deg, names, exps)


def _coerce(x):
    if isinstance(x, ParamPoly):
        return x
    try:
        return ParamPoly.const(x)
    except TypeError:
        return None


def param(name):
    """Shorthand for ``ParamPoly.var(name)``."""
    return ParamPoly.var(name)


def format_poly(p):
    """Canonical text, e.g. ``3*alpha^2*C - c + 2*i``."""
    if not p.terms:
        return "0"
    pieces = []
    for mono, coeff in p.sorted_terms():
        mono_s = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
        if coeff.im and coeff.re:
            c_s = _fmt_gauss(coeff)
            sign = "+"
        else:
            neg = (coeff.re < 0) if coeff.im == 0 else (coeff.im < 0)
            sign = "-" if neg else "+"
            c_s = _fmt_gauss(-coeff if neg else coeff)
        if mono_s:
            body = mono_s if c_s == "1" else f"{c_s}*{mono_s}"
        else:
            body = c_s
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class NonlinearError(ValueError):
    """A designated unknown occurs nonlinearly."""


class LinearSolution:
    """Result of :func:`solve_linear`.

    ``values`` maps each pivot unknown to ``(numerator, denominator)``
    ParamPolys expressed in the free unknowns and parameters; ``free``
    lists unknowns left undetermined.
    """

    def __init__(self, consistent, values, free, obstruction=None):
        self.consistent = consistent
        self.values = values
        self.free = free
        self.obstruction = obstruction

    def value(self, name):
        """Solved value as a ParamPoly; requires a scalar denominator."""
        num, den = self.values[name]
        return num / den.constant_value()

    def __repr__(self):
        if not self.consistent:
            return f"LinearSolution(inconsistent: {self.obstruction} = 0)"
        parts = [f"{k} = ({n})/({d})" for k, (n, d) in self.values.items()]
        return f"LinearSolution({', '.join(parts)}; free={self.free})"


def solve_linear(equations, unknowns):
    """Solve ``eq == 0`` for every equation, linear in ``unknowns``.

    Fraction-free elimination over the polynomial ring in the remaining
    parameters; a pivot is any nonzero ParamPoly (constants preferred), so solutions are quotients
    valid wherever the denominators are nonzero.  Unknowns are pivoted in the
    order given.  A row reducing to a nonzero polynomial free of unknowns
    makes the system inconsistent.
    """
    unknowns = list(unknowns)
    rows = []
    for eq in equations:
        eq = _coerce(eq)
        row = {}
        rest = {}
        for mono, coeff in eq.terms.items():
            hits = [(n, e) for n, e in mono if n in unknowns]
            if not hits:
                rest[mono] = coeff
                continue
            if len(hits) > 1 or hits[0][1] != 1:
                raise NonlinearError(f"nonlinear occurrence of unknowns in {eq}")
            name = hits[0][0]
            other = tuple((n, e) for n, e in mono if n != name)
            row.setdefault(name, {})[other] = coeff
        row = {k: ParamPoly(v) for k, v in row.items()}
        row = {k: v for k, v in row.items() if v}
        rows.append((row, -ParamPoly(rest)))

    pivots = []
    remaining = rows
    for name in unknowns:
        cands = [k for k, (r, _) in enumerate(remaining) if name in r]
        if not cands:
            continue
        # prefer the simplest pivot so constant pivots avoid spurious denominators
        idx = min(cands, key=lambda k: (not remaining[k][0][name].is_constant(), len(remaining[k][0][name].terms), k))
        prow, prhs = remaining.pop(idx)
        p = prow[name]
        nxt = []
        for row, rhs in remaining:
            f = row.get(name)
            if f is None:
                nxt.append((row, rhs))
                continue
            new = {}
            for k in set(row) | set(prow):
                v = p * row.get(k, ParamPoly()) - f * prow.get(k, ParamPoly())
                if v:
                    new[k] = v
            new.pop(name, None)
            new_rhs = p * rhs - f * prhs
            if p.is_constant():
                inv = p.constant_value().inverse()
                new = {k: v * inv for k, v in new.items()}
                new_rhs = new_rhs * inv
            nxt.append((new, new_rhs))
        remaining = nxt
        pivots.append((name, prow, prhs))

    for row, rhs in remaining:
        if not row and rhs:
            return LinearSolution(False, {}, [], obstruction=rhs)

    pivot_names = {n for n, _, _ in pivots}
    free = [u for u in unknowns if u not in pivot_names]
    values = {}
    # back substitution, keeping each value as num/den
    for name, prow, prhs in reversed(pivots):
        den = prow[name]
        num = prhs
        common = ParamPoly.const(1)
        for other, coeff in prow.items():
            if other == name:
                continue
            if other in values:
                onum, oden = values[other]
                num = num * oden - coeff * onum * common
                common = common * oden
            else:
                num = num - coeff * ParamPoly.var(other) * common
        den = den * common
        if not num:
            den = ParamPoly.const(1)
        elif den.is_constant():
            num = num / den.constant_value()
            den = ParamPoly.const(1)
        values[name] = (num, den)
    ordered = {u: values[u] for u in unknowns if u in values}
    return LinearSolution(True, ordered, free)
