"""Exact dense linear algebra over Q and Q(i).

Matrices and vectors are numpy arrays of ``dtype=object`` holding
Fractions or Gaussian rationals.  Elimination works on sparse row
dictionaries internally, because the Leibniz systems assembled elsewhere in
the package are large but very sparse.  Every rank decision is an exact
``== 0`` test.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalars import as_scalar

__all__ = [
    "DimensionError",
    "Subspace",
    "AffineSolution",
    "as_matrix",
    "as_vector",
    "zeros",
    "eye",
    "rref",
    "rank",
    "nullspace",
    "solve_affine",
    "det",
    "inverse",
    "is_zero",
]


class DimensionError(ValueError):
    pass


def zeros(*shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def as_matrix(rows):
    """Object matrix with canonical scalar entries; accepts nested lists or arrays."""
    a = np.array(rows, dtype=object)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = as_scalar(x)
    return out


def as_vector(v):
    a = np.array(v, dtype=object)
    if a.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {a.shape}")
    out = np.empty(a.shape, dtype=object)
    for i, x in enumerate(a):
        out[i] = as_scalar(x)
    return out


def is_zero(a) -> bool:
    return all(x == 0 for x in np.asarray(a, dtype=object).flat)


# ---------------------------------------------------------------------------
# sparse elimination core

def _to_rows(m):
    m = np.asarray(m, dtype=object)
    rows = []
    for r in m:
        d = {j: x for j, x in enumerate(r) if x != 0}
        if d:
            rows.append(d)
    return rows


def rref_rows(rows, ncols):
    """Reduced row echelon form of sparse rows ``{col: value}``.

    Returns a list of ``(pivot, row)`` sorted by pivot; zero rows are
    dropped and every pivot entry is 1.
    """
    rows = [dict(r) for r in rows if r]
    done = []
    for col in range(ncols):
        pick = None
        for k, r in enumerate(rows):
            if r.get(col, 0) != 0:
                pick = k
                break
        if pick is None:
            continue
        prow = rows.pop(pick)
        inv = Fraction(1) / prow[col]
        prow = {j: x * inv for j, x in prow.items()}
        prow[col] = Fraction(1)
        for group in (rows, [r for _, r in done]):
            for r in group:
                f = r.get(col, 0)
                if f != 0:
                    for j, x in prow.items():
                        y = r.get(j, 0) - f * x
                        if y == 0:
                            r.pop(j, None)
                        else:
                            r[j] = y
        rows = [r for r in rows if r]
        done.append((col, prow))
        if not rows:
            break
    return done


def rref(m):
    """Return ``(R, pivots)`` with R the nonzero rows of the reduced echelon form."""
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        raise DimensionError("rref expects a matrix")
    red = rref_rows(_to_rows(m), m.shape[1])
    R = zeros(len(red), m.shape[1])
    for i, (_, r) in enumerate(red):
        for j, x in r.items():
            R[i, j] = x
    return R, [p for p, _ in red]


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(rref_rows(_to_rows(m), m.shape[1]))


def _null_from_rref(red, ncols):
    pivots = {p: r for p, r in red}
    free = [j for j in range(ncols) if j not in pivots]
    vecs = []
    for f in free:
        v = zeros(ncols)
        v[f] = Fraction(1)
        for p, r in red:
            x = r.get(f, 0)
            if x != 0:
                v[p] = -x
        vecs.append(v)
    return vecs


def nullspace(m) -> "Subspace":
    """Subspace {v : m v = 0}."""
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        raise DimensionError("nullspace expects a matrix")
    ncols = m.shape[1]
    red = rref_rows(_to_rows(m), ncols)
    return Subspace(ncols, _null_from_rref(red, ncols))


def nullspace_rows(rows, ncols) -> "Subspace":
    """Nullspace of a matrix given as sparse rows; used for big Leibniz systems."""
    red = rref_rows(rows, ncols)
    return Subspace(ncols, _null_from_rref(red, ncols))


@dataclass(frozen=True)
class AffineSolution:
    particular: np.ndarray
    homogeneous: "Subspace"


def solve_affine(a, b):
    """Solve ``a x = b``; returns an :class:`AffineSolution` or ``None`` when infeasible."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DimensionError(f"cannot solve system of shape {a.shape} with rhs {b.shape}")
    n = a.shape[1]
    rows = []
    for i in range(a.shape[0]):
        d = {j: x for j, x in enumerate(a[i]) if x != 0}
        if b[i] != 0:
            d[n] = b[i]
        if d:
            rows.append(d)
    red = rref_rows(rows, n + 1)
    if red and red[-1][0] == n:
        return None
    x = zeros(n)
    for p, r in red:
        x[p] = r.get(n, Fraction(0))
    hom = Subspace(n, _null_from_rref([(p, {j: v for j, v in r.items() if j < n}) for p, r in red], n))
    return AffineSolution(x, hom)


def det(m):
    m = np.array(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError("det expects a square matrix")
    m = m.copy()
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r, c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
            out = -out
        out = out * m[c, c]
        for r in range(c + 1, n):
            if m[r, c] != 0:
                f = m[r, c] / m[c, c]
                m[r, c:] = m[r, c:] - f * m[c, c:]
    return out


def inverse(m):
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError("inverse expects a square matrix")
    aug = np.concatenate([m, eye(n)], axis=1)
    R, piv = rref(aug)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


# ---------------------------------------------------------------------------

class Subspace:
    """Linear subspace of K^n with a canonical reduced echelon basis.

    Two subspaces are equal iff their basis arrays are equal entrywise.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, vectors=()):
        self.ambient = int(ambient)
        rows = []
        for v in vectors:
            v = np.asarray(v, dtype=object)
            if v.shape != (self.ambient,):
                raise DimensionError(f"vector of shape {v.shape} in ambient dimension {self.ambient}")
            d = {j: x for j, x in enumerate(v) if x != 0}
            if d:
                rows.append(d)
        red = rref_rows(rows, self.ambient)
        self.basis = zeros(len(red), self.ambient)
        for i, (_, r) in enumerate(red):
            for j, x in r.items():
                self.basis[i, j] = x
        self.pivots = tuple(p for p, _ in red)

    @classmethod
    def coordinate(cls, ambient, indices):
        """Span of standard basis vectors ``e_i`` for ``i`` in ``indices``."""
        vecs = []
        for i in indices:
            v = zeros(ambient)
            v[i] = Fraction(1)
            vecs.append(v)
        return cls(ambient, vecs)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient):
        return cls.coordinate(ambient, range(ambient))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self):
        return [self.basis[i].copy() for i in range(self.dim)]

    def _check(self, other):
        if self.ambient != other.ambient:
            raise DimensionError(f"ambient dimensions differ: {self.ambient} vs {other.ambient}")

    def reduce(self, v):
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        v = np.array(v, dtype=object)
        for i, p in enumerate(self.pivots):
            f = v[p]
            if f != 0:
                v = v - f * self.basis[i]
        return v

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=object)
        if v.shape != (self.ambient,):
            raise DimensionError("vector has wrong length")
        return is_zero(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v):
        """Coefficients of ``v`` in the echelon basis; raises if ``v`` is not in the span."""
        v = np.asarray(v, dtype=object)
        c = np.array([v[p] for p in self.pivots], dtype=object)
        if not is_zero(self.reduce(v)):
            raise ValueError("vector is not in the subspace")
        return c

    def contains_subspace(self, other) -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.basis)

    def __le__(self, other):
        return other.contains_subspace(self)

    def sum(self, other) -> "Subspace":
        self._check(other)
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    __add__ = sum

    def annihilator(self) -> "Subspace":
        """Vectors y with ``b . y = 0`` for every basis vector b (plain bilinear pairing)."""
        if self.dim == 0:
            return Subspace.full(self.ambient)
        return nullspace(self.basis)

    def intersect(self, other) -> "Subspace":
        self._check(other)
        rows = list(self.annihilator().basis) + list(other.annihilator().basis)
        if not rows:
            return Subspace.full(self.ambient)
        return nullspace(np.array(rows, dtype=object))

    def __and__(self, other):
        return self.intersect(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.pivots == other.pivots
                and all(x == y for x, y in zip(self.basis.flat, other.basis.flat)))

    def __hash__(self):
        return hash((self.ambient, self.pivots))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"
