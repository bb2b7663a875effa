"""The quantized algebra generated by H, Ep, Em with a scalar Casimir.

Quantum relations come from the bracket rule Q({f, g}) = i[Q(f), Q(g)]
applied to the standard triple:

    [H, Ep] = -2i Ep,   [H, Em] = 2i Em,   [Ep, Em] = -i H,

together with H^2 + 4(Ep, Em) = C I, where (A, B) = (AB + BA)/2.  Every
element reduces to a combination of ``H^j Ep^l`` and ``H^k Em^m``.

Two independent reduction routes are provided:

* :func:`nc_reduce` rewrites words letter by letter with the rules

      (R1) Ep H -> H Ep + 2i Ep
      (R2) Em H -> H Em - 2i Em
      (R3) Em Ep -> Ep Em + i H
      (R4) Ep Em -> (C - H^2 - 2i H)/4

  Termination: (number of E letters, Em-before-Ep inversions,
  E-before-H inversions) decreases lexicographically at every step.

* :func:`nc_mul` multiplies normal forms directly using
  ``E^t f(H) = f(H + 2it) E^t`` and closed forms for ``Ep^l Em^m``.

An :class:`NcPoly` key is ``(j, t)`` meaning ``H^j E^t`` with ``E^t = Ep^t``
for ``t > 0``, ``Em^(-t)`` for ``t < 0`` and the identity for ``t = 0``.
"""

from __future__ import annotations

import heapq
import random
from fractions import Fraction
from functools import lru_cache

from .exactnum import GaussRational, ParamPoly, as_gauss
from .expr import BinOp, Bracket, Neg, Num, Pow, Sym, parse
from .linalg import SparseMatrix, rank

__all__ = [
    "NcPoly",
    "LETTERS",
    "H",
    "Ep",
    "Em",
    "ONE",
    "TruncationError",
    "nc_reduce",
    "nc_mul",
    "nc_commutator",
    "nc_sym",
    "basis_enumerate",
    "basis_independence_check",
    "eval_in_module",
    "evaluate",
    "random_word",
    "is_normal_word",
    "confluence_check",
    "homomorphism_check",
    "casimir_centrality_by_reduction",
]

LETTERS = ("H", "Ep", "Em")
_I = GaussRational(0, 1)
_C = ParamPoly.var("C")


def _as_param(v):
    return v if isinstance(v, ParamPoly) else ParamPoly.const(as_gauss(v))


class NcPoly:
    """Element of the quantized algebra in normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for (j, t), v in terms.items():
                v = _as_param(v)
                if v:
                    self.terms[(j, t)] = v

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def scalar(cls, value):
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, j, t, coeff=1):
        return cls({(j, t): coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Filtration degree: largest ``j + |t|`` present."""
        return max((j + abs(t) for j, t in self.terms), default=0)

    def coefficient(self, j, t):
        return self.terms.get((j, t), ParamPoly())

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return NcPoly._raw({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        other = _as_nc(other)
        if other is None:
            return NotImplemented
        return NcPoly._raw(_accumulate(dict(self.terms), other.terms.items()))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_nc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_nc(other) - self

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            return nc_mul(self, other)
        if isinstance(other, (ParamPoly, GaussRational, int, Fraction)):
            g = _as_param(other)
            return NcPoly._raw({k: v * g for k, v in self.terms.items() if v * g})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (ParamPoly, GaussRational, int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        out = ONE
        for _ in range(n):
            out = nc_mul(out, self)
        return out

    def substitute(self, bindings):
        return NcPoly({k: v.substitute(bindings) for k, v in self.terms.items()})

    def __repr__(self):
        return f"NcPoly({self})"

    def __str__(self):
        return format_nc(self)


def _accumulate(out, items):
    for k, v in items:
        w = out.get(k)
        w = v if w is None else w + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _as_nc(x):
    if isinstance(x, NcPoly):
        return x
    try:
        return NcPoly.scalar(_as_param(x))
    except TypeError:
        return None


def format_nc(p):
    if not p.terms:
        return "0"
    pieces = []
    for j, t in sorted(p.terms, key=lambda k: (-(k[0] + abs(k[1])), -abs(k[1]), -k[1])):
        coeff = p.terms[(j, t)]
        parts = []
        if j:
            parts.append("H" if j == 1 else f"H^{j}")
        if t:
            name = "Ep" if t > 0 else "Em"
            parts.append(name if abs(t) == 1 else f"{name}^{abs(t)}")
        mono = "*".join(parts)
        cs = str(coeff)
        if not mono:
            pieces.append(f"({cs})" if len(coeff.terms) > 1 else cs)
        elif cs == "1":
            pieces.append(mono)
        elif cs == "-1":
            pieces.append(f"-{mono}")
        elif len(coeff.terms) > 1 or " " in cs:
            pieces.append(f"({cs})*{mono}")
        else:
            pieces.append(f"{cs}*{mono}")
    return " + ".join(pieces).replace("+ -", "- ")


ONE = NcPoly.scalar(1)
H = NcPoly.monomial(1, 0)
Ep = NcPoly.monomial(0, 1)
Em = NcPoly.monomial(0, -1)


# --- direct multiplication of normal forms --------------------------------
# univariate polynomials in H: dict power -> ParamPoly


def _upoly_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            w = out.get(k)
            out[k] = x * y if w is None else w + x * y
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _shift_power(b, t):
    """(H + 2it)^b as a dict power -> ParamPoly."""
    out = {0: ParamPoly.const(1)}
    lin = {1: ParamPoly.const(1)}
    if t:
        lin[0] = ParamPoly.const(GaussRational(0, 2 * t))
    for _ in range(b):
        out = _upoly_mul(out, lin)
    return out


def _compose_shift(f, shift):
    """f(H + 2i*shift)."""
    out = {}
    for k, v in f.items():
        for p, w in _shift_power(k, shift).items():
            x = out.get(p)
            out[p] = v * w if x is None else x + v * w
    return {k: v for k, v in out.items() if v}


# Ep Em = (C - H^2 - 2iH)/4,  Em Ep = (C - H^2 + 2iH)/4
_EP_EM = {0: _C * Fraction(1, 4), 1: ParamPoly.const(GaussRational(0, Fraction(-1, 2))), 2: ParamPoly.const(Fraction(-1, 4))}
_EM_EP = {0: _C * Fraction(1, 4), 1: ParamPoly.const(GaussRational(0, Fraction(1, 2))), 2: ParamPoly.const(Fraction(-1, 4))}


@lru_cache(maxsize=None)
def _ladder(t, u):
    """E^t E^u = P(H) E^(t+u); returns P as a dict."""
    if t == 0 or u == 0 or (t > 0) == (u > 0):
        return {0: ParamPoly.const(1)}
    sign = 1 if t > 0 else -1
    rest = t - sign
    # E^t E^u = E^rest (E E') E^(u+sign), and E^rest f(H) = f(H + 2i rest) E^rest
    middle = _compose_shift(_EP_EM if t > 0 else _EM_EP, rest)
    return _upoly_mul(middle, _ladder(rest, u + sign))


@lru_cache(maxsize=None)
def _mono_product(a, t, b, u):
    """(H^a E^t)(H^b E^u) as a tuple of ((j, t+u), coeff)."""
    poly = {a: ParamPoly.const(1)}
    poly = _upoly_mul(poly, _shift_power(b, t))
    poly = _upoly_mul(poly, _ladder(t, u))
    shift = t + u
    return tuple(((j, shift), v) for j, v in poly.items())


def nc_mul(a, b):
    """Product of two normal forms, again in normal form."""
    out = {}
    for (j1, t1), c1 in a.terms.items():
        for (j2, t2), c2 in b.terms.items():
            c = c1 * c2
            for key, v in _mono_product(j1, t1, j2, t2):
                w = out.get(key)
                out[key] = c * v if w is None else w + c * v
    return NcPoly._raw({k: v for k, v in out.items() if v})


def nc_commutator(a, b):
    """[a, b] = ab - ba."""
    return nc_mul(a, b) - nc_mul(b, a)


def nc_sym(a, b):
    """(a, b) = (ab + ba)/2."""
    return (nc_mul(a, b) + nc_mul(b, a)) * Fraction(1, 2)


# --- word rewriting ---------------------------------------------------------

_HALF_I = GaussRational(0, Fraction(1, 2))
_RULES = {
    ("Ep", "H"): ((("H", "Ep"), ParamPoly.const(1)), (("Ep",), ParamPoly.const(GaussRational(0, 2)))),
    ("Em", "H"): ((("H", "Em"), ParamPoly.const(1)), (("Em",), ParamPoly.const(GaussRational(0, -2)))),
    ("Em", "Ep"): ((("Ep", "Em"), ParamPoly.const(1)), (("H",), ParamPoly.const(_I))),
    ("Ep", "Em"): (
        ((), _C * Fraction(1, 4)),
        (("H", "H"), ParamPoly.const(Fraction(-1, 4))),
        (("H",), ParamPoly.const(-_HALF_I)),
    ),
}


def is_normal_word(word):
    return _redexes(word) == []


def _redexes(word):
    return [p for p in range(len(word) - 1) if (word[p], word[p + 1]) in _RULES]


def _word_key(word):
    j = 0
    while j < len(word) and word[j] == "H":
        j += 1
    tail = word[j:]
    if not tail:
        return (j, 0)
    return (j, len(tail) if tail[0] == "Ep" else -len(tail))


def termination_measure(word):
    """(E letters, Em-before-Ep pairs, E-before-H pairs)."""
    e_count = sum(1 for x in word if x != "H")
    em_ep = 0
    e_h = 0
    ems = 0
    es = 0
    for x in word:
        if x == "Ep":
            em_ep += ems
            es += 1
        elif x == "Em":
            ems += 1
            es += 1
        else:
            e_h += es
    return (e_count, em_ep, e_h)


def _normalize_input(expr):
    """Accept a word, a (word, coeff) list, a dict word->coeff or an NcPoly."""
    if isinstance(expr, NcPoly):
        out = {}
        for (j, t), v in expr.terms.items():
            word = ("H",) * j + (("Ep",) * t if t > 0 else ("Em",) * (-t))
            out[word] = v
        return out
    if isinstance(expr, tuple) and all(isinstance(x, str) for x in expr):
        expr = [(expr, 1)]
    elif isinstance(expr, dict):
        expr = list(expr.items())
    out = {}
    for word, coeff in expr:
        word = tuple(x for x in word if x != "I")
        for x in word:
            if x not in LETTERS:
                raise ValueError(f"unknown letter {x!r}")
        _accumulate(out, [(word, _as_param(coeff))])
    return out


def nc_reduce(expr, strategy="leftmost", rng=None, check_termination=False):
    """Rewrite a formal sum of words to normal form.

    ``strategy`` picks the redex in each word: ``"leftmost"``,
    ``"rightmost"`` or ``"random"`` (using ``rng``).  The result does not
    depend on the choice.

    Words are processed in decreasing termination measure, so equal words
    are merged before being rewritten and each one is rewritten once.
    """
    pending = _normalize_input(expr)
    if strategy == "random" and rng is None:
        rng = random.Random(0)
    heap = [(_neg_measure(w), w) for w in pending]
    heapq.heapify(heap)
    result = {}
    while heap:
        _, word = heapq.heappop(heap)
        coeff = pending.pop(word, None)
        if coeff is None:
            continue
        spots = _redexes(word)
        if not spots:
            _accumulate(result, [(_word_key(word), coeff)])
            continue
        if strategy == "leftmost":
            p = spots[0]
        elif strategy == "rightmost":
            p = spots[-1]
        elif strategy == "random":
            p = rng.choice(spots)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        before, after = word[:p], word[p + 2 :]
        for rhs, factor in _RULES[(word[p], word[p + 1])]:
            new = before + rhs + after
            if check_termination and not termination_measure(new) < termination_measure(word):
                raise AssertionError(f"rewrite {word} -> {new} does not decrease the measure")
            if new not in pending:
                heapq.heappush(heap, (_neg_measure(new), new))
            _accumulate(pending, [(new, coeff * factor)])
    return NcPoly._raw(result)


def _neg_measure(word):
    return tuple(-x for x in termination_measure(word))


def random_word(rng, max_length=8):
    return tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, max_length)))


# --- basis and modules --------------------------------------------------------


def basis_enumerate(r):
    """The normal monomials H^j Ep^l (j + l <= r) and H^k Em^m (k + m <= r, m >= 1)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    plus = [(j, l) for l in range(r + 1) for j in range(r + 1 - l)]
    minus = [(k, -m) for m in range(1, r + 1) for k in range(r + 1 - m)]
    return plus + minus


class TruncationError(ValueError):
    """The truncated module is too small for the requested exact check."""


def _module_bindings(module, bindings):
    out = {"C": module.casimir_parameter(), "s": module.s}
    if bindings:
        out.update(bindings)
    return out


def _matrix_power(module, name, k, cache):
    key = (name, k)
    if key not in cache:
        if k == 0:
            cache[key] = module.identity()
        else:
            cache[key] = _matrix_power(module, name, k - 1, cache) @ module.generator(name)
    return cache[key]


def eval_in_module(a, module, bindings=None):
    """Exact matrix of an NcPoly or a word in a :class:`WeightModule`.

    ``C`` is bound to ``1 - s^2`` and ``s`` to the module label; any other
    parameter must appear in ``bindings``.
    """
    if isinstance(a, tuple):
        out = module.identity()
        for x in a:
            if x != "I":
                out = out @ module.generator(x)
        return out
    env = _module_bindings(module, bindings)
    cache = {}
    total = SparseMatrix.zeros(module.levels)
    for (j, t), coeff in a.terms.items():
        value = coeff.evaluate(env)
        if not value:
            continue
        mono = _matrix_power(module, "H", j, cache)
        if t:
            mono = mono @ _matrix_power(module, "Ep" if t > 0 else "Em", abs(t), cache)
        total = total + mono.scale(value)
    return total


def basis_independence_check(r, module):
    """Exact rank of the images of the degree-r basis on safe columns."""
    if module.levels < 3 * r + 1:
        raise TruncationError(f"need at least {3 * r + 1} levels for r = {r}, got {module.levels}")
    cols = set(module.interior(r))
    vectors = []
    for j, t in basis_enumerate(r):
        mat = eval_in_module(NcPoly.monomial(j, t), module)
        vectors.append({k: v for k, v in mat.entries.items() if k[1] in cols})
    rk = rank(vectors)
    size = (r + 1) ** 2
    return {"r": r, "s": str(module.s), "levels": module.levels, "rank": rk, "expected": size, "passed": rk == size}


def _word_to_nc(word):
    out = ONE
    for x in word:
        out = nc_mul(out, {"H": H, "Ep": Ep, "Em": Em}[x])
    return out


def confluence_check(trials=1000, seed=0, max_length=8):
    """Leftmost, rightmost and random rewriting agree with each other and with nc_mul."""
    rng = random.Random(seed)
    bad = []
    for t in range(trials):
        w = random_word(rng, max_length)
        left = nc_reduce(w, "leftmost", check_termination=True)
        right = nc_reduce(w, "rightmost")
        rand = nc_reduce(w, "random", rng=random.Random(rng.getrandbits(32)))
        if not (left == right == rand == _word_to_nc(w)):
            bad.append(w)
    return {"trials": trials, "seed": seed, "max_length": max_length, "failures": bad, "passed": not bad}


def homomorphism_check(module, trials=200, seed=0, max_length=8):
    """Matrix of a word equals the matrix of its normal form on margin-safe columns."""
    rng = random.Random(seed)
    cols = set(module.interior(max_length))
    if not cols:
        raise TruncationError(f"no columns {max_length} levels from both ends of a {module.levels}-level module")
    bad = []
    for _ in range(trials):
        w = random_word(rng, max_length)
        direct = eval_in_module(w, module)
        reduced = eval_in_module(nc_reduce(w), module)
        if (direct - reduced).restrict_columns(cols).entries:
            bad.append(w)
    return {"trials": trials, "seed": seed, "columns": sorted(cols), "failures": bad, "passed": not bad}


def casimir_centrality_by_reduction():
    """H^2 + 2 EpEm + 2 EmEp reduces to C and commutes with every generator."""
    cas = [(("H", "H"), 1), (("Ep", "Em"), 2), (("Em", "Ep"), 2)]
    value = nc_reduce(cas)
    results = {"H^2 + 4(Ep,Em) = C": value == NcPoly.scalar(ParamPoly.var("C"))}
    for g in LETTERS:
        words = [(w + (g,), k) for w, k in cas] + [((g,) + w, -k) for w, k in cas]
        results[f"[H^2 + 4(Ep,Em), {g}] = 0"] = nc_reduce(words).is_zero()
    return {"results": results, "passed": all(results.values())}


# --- quantum expression trees -------------------------------------------------


def evaluate(tree, bindings=None):
    """Evaluate a quantum-grammar tree (or text) to an NcPoly."""
    if isinstance(tree, str):
        tree = parse(tree, "quantum")
    out = _eval(tree)
    if bindings:
        out = out.substitute(bindings)
    return out


def _eval(node):
    if isinstance(node, Num):
        return NcPoly.scalar(node.value)
    if isinstance(node, Sym):
        name = node.name
        if name == "H":
            return H
        if name == "Ep":
            return Ep
        if name == "Em":
            return Em
        if name == "I":
            return ONE
        if name == "i":
            return NcPoly.scalar(_I)
        return NcPoly.scalar(ParamPoly.var(name))
    if isinstance(node, Neg):
        return -_eval(node.operand)
    if isinstance(node, Pow):
        return _eval(node.base) ** node.exponent
    if isinstance(node, BinOp):
        left, right = _eval(node.left), _eval(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return nc_mul(left, right)
        if node.op == "/":
            if set(right.terms) - {(0, 0)}:
                raise ValueError("division only by constants")
            den = right.coefficient(0, 0)
            if not den.is_constant():
                raise ValueError("division only by numeric constants, not parameters")
            return left * den.constant_value().inverse()
    if isinstance(node, Bracket):
        left, right = _eval(node.left), _eval(node.right)
        if node.kind == "commutator":
            return nc_commutator(left, right)
        if node.kind == "sym":
            return nc_sym(left, right)
    raise TypeError(f"cannot evaluate {node!r} in the quantum algebra")
