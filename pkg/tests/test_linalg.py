from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tanaka.linalg import (Subspace, as_matrix, det, eye, inverse, is_zero, nullspace, rank, rref, solve_affine,
                           zeros)

entries = st.integers(-3, 3).map(F)


@st.composite
def matrices(draw, rows=None, cols=None):
    r = rows or draw(st.integers(1, 4))
    c = cols or draw(st.integers(1, 4))
    return as_matrix([[draw(entries) for _ in range(c)] for _ in range(r)])


@st.composite
def square(draw):
    n = draw(st.integers(1, 4))
    return draw(matrices(n, n))


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + nullspace(m).dim == m.shape[1]
    for v in nullspace(m).vectors():
        assert is_zero(m.dot(v))


@given(matrices())
def test_rref_is_idempotent_and_reduced(m):
    R, piv = rref(m)
    R2, piv2 = rref(R)
    assert piv == piv2 and (R == R2).all()
    for r, p in enumerate(piv):
        assert R[r, p] == 1
        assert all(R[k, p] == 0 for k in range(R.shape[0]) if k != r)


@given(square(), square())
def test_det_multiplicative(a, b):
    if a.shape == b.shape:
        assert det(a.dot(b)) == det(a) * det(b)


@given(square())
def test_inverse(a):
    if det(a) != 0:
        assert (a.dot(inverse(a)) == eye(a.shape[0])).all()
    else:
        with pytest.raises(ZeroDivisionError):
            inverse(a)


@given(matrices(), st.data())
def test_solve_affine(a, data):
    x = as_matrix([[data.draw(entries)] for _ in range(a.shape[1])])[:, 0]
    b = a.dot(x)
    sol = solve_affine(a, b)
    assert sol is not None
    assert (a.dot(sol.particular) == b).all()


def test_solve_affine_infeasible():
    a = as_matrix([[1, 1], [1, 1]])
    assert solve_affine(a, as_matrix([[1], [2]])[:, 0]) is None


@st.composite
def subspaces(draw, n=4):
    k = draw(st.integers(0, 3))
    return Subspace(n, [as_matrix([[draw(entries) for _ in range(n)]])[0] for _ in range(k)])


@given(subspaces(), subspaces())
def test_dimension_formula(u, w):
    assert (u + w).dim + (u & w).dim == u.dim + w.dim
    assert (u & w) <= u and u <= (u + w)


@given(subspaces())
def test_annihilator(u):
    ann = u.annihilator()
    assert ann.dim == u.ambient - u.dim
    for a in ann.vectors():
        for v in u.vectors():
            assert a.dot(v) == 0
    assert ann.annihilator() == u


@given(subspaces(), st.data())
def test_coordinates(u, data):
    cs = [data.draw(entries) for _ in range(u.dim)]
    v = sum((c * b for c, b in zip(cs, u.vectors())), zeros(u.ambient))
    assert v in u
    assert list(u.coordinates(v)) == cs


def test_canonical_basis_equality():
    u = Subspace(3, [as_matrix([[1, 2, 3]])[0], as_matrix([[0, 1, 1]])[0]])
    w = Subspace(3, [as_matrix([[1, 3, 4]])[0], as_matrix([[1, 1, 2]])[0]])
    assert u == w
    assert list(u.pivots) == [0, 1]
    assert list(Subspace.coordinate(3, [0, 2]).pivots) == [0, 2]
    assert Subspace.zero(3).dim == 0 and Subspace.full(3).dim == 3


def test_object_arrays_stay_exact():
    m = as_matrix([[1, 2], [3, 4]])
    assert m.dtype == object
    assert det(m) == -2
    assert inverse(m)[0, 0] == -2 and isinstance(inverse(m)[1, 0], F)
    assert isinstance(np.asarray(nullspace(as_matrix([[1, 1]])).basis)[0, 0], F)
