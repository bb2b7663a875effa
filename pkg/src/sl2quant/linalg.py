"""Sparse exact matrices over Q(i) and rank by Gaussian elimination."""

from __future__ import annotations

from .exactnum import GaussRational, as_gauss

__all__ = ["SparseMatrix", "rank", "row_echelon"]


class SparseMatrix:
    """A square or rectangular matrix stored as ``{(row, col): value}``.

    Zero entries are never stored.
    """

    __slots__ = ("shape", "entries")

    def __init__(self, shape, entries=None):
        self.shape = tuple(shape)
        self.entries = {}
        if entries:
            for key, v in entries.items():
                v = as_gauss(v)
                if v:
                    self.entries[key] = v

    @classmethod
    def identity(cls, n):
        return cls((n, n), {(k, k): 1 for k in range(n)})

    @classmethod
    def zeros(cls, n, m=None):
        return cls((n, n if m is None else m))

    def __getitem__(self, key):
        return self.entries.get(key, GaussRational(0))

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            w = out.get(k)
            w = v if w is None else w + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return SparseMatrix._raw(self.shape, out)

    def __neg__(self):
        return SparseMatrix._raw(self.shape, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, g):
        g = as_gauss(g)
        if not g:
            return SparseMatrix(self.shape)
        return SparseMatrix._raw(self.shape, {k: v * g for k, v in self.entries.items()})

    def __matmul__(self, other):
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                x = out.get(key)
                out[key] = v * w if x is None else x + v * w
        return SparseMatrix._raw((self.shape[0], other.shape[1]), {k: v for k, v in out.items() if v})

    def column(self, c):
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def restrict_columns(self, cols):
        cols = set(cols)
        return SparseMatrix._raw(self.shape, {k: v for k, v in self.entries.items() if k[1] in cols})

    def is_zero(self):
        return not self.entries

    def to_json(self):
        """List of ``[row, col, re_num, re_den, im_num, im_den]`` rows, sorted."""
        return [
            [r, c, v.re.numerator, v.re.denominator, v.im.numerator, v.im.denominator]
            for (r, c), v in sorted(self.entries.items())
        ]

    @classmethod
    def from_json(cls, shape, rows):
        from fractions import Fraction

        return cls(shape, {(r, c): GaussRational(Fraction(a, b), Fraction(x, y)) for r, c, a, b, x, y in rows})

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    @classmethod
    def _raw(cls, shape, entries):
        m = object.__new__(cls)
        m.shape = shape
        m.entries = entries
        return m

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={len(self.entries)})"


def row_echelon(vectors):
    """Reduce sparse vectors (dicts key->GaussRational) to echelon form.

    Returns the list of independent reduced rows, each normalised to have
    leading coefficient 1 at its pivot key.
    """
    basis = {}  # pivot key -> reduced row
    order = []
    for vec in vectors:
        row = {k: as_gauss(v) for k, v in vec.items() if v}
        while row:
            pivot = min(row, key=_sort_key)
            known = basis.get(pivot)
            if known is None:
                inv = row[pivot].inverse()
                row = {k: v * inv for k, v in row.items()}
                basis[pivot] = row
                order.append(pivot)
                break
            f = row[pivot]
            for k, v in known.items():
                w = row.get(k)
                w = -f * v if w is None else w - f * v
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
    return [basis[p] for p in order]


def rank(vectors):
    """Exact rank of a family of sparse vectors over Q(i)."""
    return len(row_echelon(vectors))


def _sort_key(k):
    return k if isinstance(k, tuple) else (k,)
