"""Truncated weight modules and the recursion for Q(h^2) on weight vectors.

The module has basis ``psi_n`` for ``n = n0, n0 + 2, ...`` (``levels``
vectors; ``n0 = s + 1`` by default, the lowest-weight branch), with

    H psi_n  = -i n psi_n
    Ep psi_n = -(i/2)(s + 1 + n) psi_{n+2}
    Em psi_n = -(i/2)(s + 1 - n) psi_{n-2}

Images leaving the stored range are dropped, so identities are only exact
on columns at least ``m`` levels away from both ends, where ``m`` is the
number of ladder steps involved ("margin-m interior").
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import GaussRational, ParamPoly, as_gauss
from .linalg import SparseMatrix, rank

__all__ = [
    "WeightModule",
    "XiSequence",
    "build_module",
    "check_relations",
    "casimir_value",
    "recursion_residual",
    "digamma_difference",
    "digamma_solution",
    "polynomial_solution",
    "formal_polynomial_residual",
    "recursion_suite",
    "gamma_from_relation",
    "solution_family_rank",
    "NonScalarCasimir",
]

_HALF_I = GaussRational(0, Fraction(-1, 2))  # -(i/2)


class NonScalarCasimir(ValueError):
    """The Casimir operator is not a multiple of the identity on the interior."""


@dataclass(frozen=True)
class WeightModule:
    s: Fraction
    levels: int
    base: Fraction
    H: SparseMatrix = field(repr=False)
    Ep: SparseMatrix = field(repr=False)
    Em: SparseMatrix = field(repr=False)

    def weight(self, k):
        """The label ``n`` of the k-th basis vector."""
        return self.base + 2 * k

    def weights(self):
        return [self.weight(k) for k in range(self.levels)]

    def interior(self, margin):
        """Column indices at least ``margin`` levels from both ends."""
        return list(range(margin, self.levels - margin))

    def identity(self):
        return SparseMatrix.identity(self.levels)

    def generator(self, name):
        return {"H": self.H, "Ep": self.Ep, "Em": self.Em, "I": self.identity()}[name]

    def casimir_parameter(self):
        """The value ``1 - s^2`` that the quantum Casimir takes on this module."""
        return 1 - self.s * self.s

    def to_json(self):
        return {
            "s": str(self.s),
            "base": str(self.base),
            "levels": self.levels,
            "H": self.H.to_json(),
            "Ep": self.Ep.to_json(),
            "Em": self.Em.to_json(),
        }


def build_module(s, levels, base=None):
    """Exact matrices of H, Ep, Em on ``levels`` consecutive weight vectors."""
    s = Fraction(s)
    if levels < 3:
        raise ValueError("a weight module needs at least 3 levels")
    base = s + 1 if base is None else Fraction(base)
    H, Ep, Em = {}, {}, {}
    for k in range(levels):
        n = base + 2 * k
        H[(k, k)] = GaussRational(0, -n)
        if k + 1 < levels:
            Ep[(k + 1, k)] = _HALF_I * (s + 1 + n)
        if k >= 1:
            Em[(k - 1, k)] = _HALF_I * (s + 1 - n)
    shape = (levels, levels)
    return WeightModule(s, levels, base, SparseMatrix(shape, H), SparseMatrix(shape, Ep), SparseMatrix(shape, Em))


@dataclass
class RelationReport:
    passed: bool
    relations: dict
    columns: list


def check_relations(module):
    """[H, Ep] = -2i Ep, [H, Em] = 2i Em, [Ep, Em] = -i H on margin-1 columns."""
    H, Ep, Em = module.H, module.Ep, module.Em
    cols = module.interior(1)
    two_i = GaussRational(0, 2)
    rels = {
        "[H,Ep] = -2i*Ep": (H @ Ep - Ep @ H) + Ep.scale(two_i),
        "[H,Em] = 2i*Em": (H @ Em - Em @ H) - Em.scale(two_i),
        "[Ep,Em] = -i*H": (Ep @ Em - Em @ Ep) + H.scale(GaussRational(0, 1)),
    }
    results = {name: diff.restrict_columns(cols).is_zero() for name, diff in rels.items()}
    return RelationReport(all(results.values()), results, cols)


def casimir_matrix(module):
    """H^2 + 4*(Ep, Em) with the symmetrised product (A, B) = (AB + BA)/2."""
    H, Ep, Em = module.H, module.Ep, module.Em
    return H @ H + (Ep @ Em + Em @ Ep).scale(2)


def casimir_value(module):
    """The scalar C with H^2 + 4(Ep, Em) = C I on the margin-1 interior."""
    cols = module.interior(1)
    if not cols:
        raise ValueError("module too small: empty margin-1 interior")
    cas = casimir_matrix(module).restrict_columns(cols)
    value = cas[(cols[0], cols[0])]
    expected = SparseMatrix.identity(module.levels).scale(value).restrict_columns(cols)
    if cas != expected:
        raise NonScalarCasimir("Casimir is not scalar on the interior columns")
    return value


def _as_param(x):
    return x if isinstance(x, ParamPoly) else ParamPoly.const(as_gauss(x))


def _collapse(p):
    return p.constant_value() if p.is_constant() else p


@dataclass
class XiSequence:
    """Eigenvalues ``xi_n`` of Q(h^2) on ``psi_n``, for ``n`` in ``values``."""

    values: dict
    label: str = ""

    def __getitem__(self, n):
        return self.values[n]

    def __contains__(self, n):
        return n in self.values

    @classmethod
    def from_function(cls, fn, indices, label=""):
        return cls({n: fn(n) for n in indices}, label)


def recursion_residual(xi, s, c, n):
    """Left side minus right side of the three-term recursion at index ``n``.

    ``xi`` maps indices to values (scalars or ParamPolys).  ``xi[n-2]`` may
    be missing when its coefficient ``(s + 1 - n)(s - 1 + n)`` vanishes.
    """
    s = _as_param(s)
    c = _as_param(c)
    nn = _as_param(n)
    up = (s + (1 + nn)) * (s - (1 + nn))
    down = (s + (1 - nn)) * (s - (1 - nn))
    x0 = _as_param(xi[n])
    x_up = _as_param(xi[n + 2])
    if n - 2 in xi:
        x_down = _as_param(xi[n - 2])
        low = down * (x_down - x0)
    elif not down:
        low = ParamPoly()
    else:
        raise KeyError(f"xi[{n - 2}] is needed at n = {n}")
    bracket = up * (x0 - x_up) - low
    return _collapse(3 * x0 - bracket * Fraction(1, 8) - c)


def polynomial_solution(alpha, gamma, n):
    """``xi_n = gamma - alpha n^2``."""
    return _collapse(_as_param(gamma) - _as_param(alpha) * _as_param(n) ** 2)


def formal_polynomial_residual():
    """Recursion residual of ``gamma - alpha n^2`` with symbolic ``n`` and ``s``.

    ``gamma`` is eliminated through ``3 gamma = alpha (s^2 - 1) + c``, so the
    result is the zero ParamPoly exactly when the family solves the recursion
    for every ``n``.
    """
    a, c, n, s = (ParamPoly.var(v) for v in ("alpha", "c", "n", "s"))
    g = (a * (s * s - 1) + c) * Fraction(1, 3)

    def xi(m):
        return g - a * m * m

    up = (s + (1 + n)) * (s - (1 + n))
    down = (s + (1 - n)) * (s - (1 - n))
    bracket = up * (xi(n) - xi(n + 2)) - down * (xi(n - 2) - xi(n))
    return 3 * xi(n) - bracket * Fraction(1, 8) - c


def _harmonic(k):
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def digamma_difference(m1, m2):
    """digamma(m1) - digamma(m2) for positive integers, as H_{m1-1} - H_{m2-1}."""
    if int(m1) != m1 or int(m2) != m2 or m1 < 1 or m2 < 1:
        raise ValueError("digamma arguments must be positive integers here")
    return _harmonic(int(m1) - 1) - _harmonic(int(m2) - 1)


def digamma_solution(s, alpha, beta, gamma, n):
    """The transcendental family of solutions for even positive integer ``s``.

    xi_n = gamma - alpha n^2
           + beta ((s^2 - 3n^2 - 1)[digamma((1+n-s)/2) - digamma((1+n+s)/2)] - 6ns)
    """
    if int(s) != s or s <= 0 or int(s) % 2:
        raise ValueError("s must be an even positive integer")
    s = int(s)
    a1 = Fraction(1 + n - s, 2)
    a2 = Fraction(1 + n + s, 2)
    if a1.denominator != 1 or a1 <= 0 or a2.denominator != 1:
        raise ValueError(f"n = {n} puts a digamma argument off the positive integers")
    psi = digamma_difference(a1, a2)
    bracket = (s * s - 3 * n * n - 1) * psi - 6 * n * s
    return _collapse(_as_param(gamma) - _as_param(alpha) * (n * n) + _as_param(beta) * bracket)


def gamma_from_relation(alpha, s, c):
    """gamma with 3 gamma = alpha (s^2 - 1) + c."""
    return _collapse((_as_param(alpha) * (_as_param(s) ** 2 - 1) + _as_param(c)) * Fraction(1, 3))


@dataclass
class RecursionReport:
    s: int
    alpha: object
    beta: object
    gamma: object
    c: object
    residuals: dict
    passed: bool
    boundary: object = None  # residual of the first-order equation at n = s + 1


def recursion_suite(s, alpha, beta, c, n_max, gamma=None):
    """Residuals of the digamma family at every ``n`` in ``s+3, s+5, ..., n_max``."""
    if gamma is None:
        gamma = gamma_from_relation(alpha, s, c)
    indices = range(s + 1, n_max + 3, 2)
    xi = XiSequence.from_function(lambda n: digamma_solution(s, alpha, beta, gamma, n), indices, "digamma")
    residuals = {n: recursion_residual(xi, s, c, n) for n in range(s + 3, n_max + 1, 2)}
    passed = all(not r for r in residuals.values())
    boundary = recursion_residual(xi, s, c, s + 1)
    return RecursionReport(s, alpha, beta, gamma, c, residuals, passed, boundary)


def random_rational(rng, bound=20, max_den=9):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))


def solution_family_rank(s, indices):
    """Exact rank of the homogeneous polynomial and digamma sequences at ``indices``."""
    poly = [polynomial_solution(1, gamma_from_relation(1, s, 0), n) for n in indices]
    dig = [digamma_solution(s, 0, 1, 0, n) for n in indices]
    return rank([dict(enumerate(poly)), dict(enumerate(dig))])

